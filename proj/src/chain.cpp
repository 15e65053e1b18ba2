#include "fsel/chain.hpp"

#include <algorithm>
#include <cmath>

#include "fsel/error.hpp"
#include "fsel/graph.hpp"

namespace fsel {

const std::vector<double>& StateChain::require_stationary() const {
    if (!stationary) {
        const auto pair = unreachable_pair(transition);
        const std::size_t from = pair ? pair->first : 0;
        const std::size_t to = pair ? pair->second : 0;
        throw NotIrreducible(states.token(static_cast<Symbol>(from)), states.token(static_cast<Symbol>(to)));
    }
    return *stationary;
}

std::optional<std::vector<double>> unichain_stationary(const Matrix& p) {
    Digraph g(p.rows());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
            if (p(i, j) > 0.0) g[i].push_back(j);
    const Condensation c = condense(g);
    std::optional<std::size_t> closed;
    for (std::size_t k = 0; k < c.components.size(); ++k) {
        if (!c.closed[k]) continue;
        if (closed) return std::nullopt;
        closed = k;
    }
    if (!closed) return std::nullopt;
    const auto& members = c.components[*closed];
    Matrix sub(members.size(), members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j) sub(i, j) = p(members[i], members[j]);
    if (unreachable_pair(sub)) return std::nullopt;  // lone state without a self-loop
    const auto local = stationary_vector(sub);
    std::vector<double> pi(p.rows(), 0.0);
    for (std::size_t i = 0; i < members.size(); ++i) pi[members[i]] = local[i];
    return pi;
}

StateChain uniform_chain(const Automaton& a) {
    if (const auto missing = a.first_missing())
        throw Incomplete(a.state_name(missing->first), a.alphabet().token(missing->second));
    const std::size_t n = a.num_states();
    const double share = 1.0 / static_cast<double>(a.alphabet().size());
    Matrix p(n, n);
    for (const auto& e : a.edges()) p(e.source, e.target) += share;
    auto stationary = unichain_stationary(p);
    return {Alphabet(a.state_names()), std::move(p), std::move(stationary)};
}

StateChain compatible_chain(const Automaton& a, const MarkovMeasure& mu, const std::vector<Symbol>& iota) {
    const auto completeness = is_shift_complete(a, mu, iota);
    if (!completeness.complete) {
        const auto [p, sym] = completeness.missing.front();
        throw NotShiftComplete(a.state_name(p), a.alphabet().token(sym));
    }
    const std::size_t n = a.num_states();
    Matrix p(n, n);
    for (const auto& e : a.edges()) p(e.source, e.target) += mu.p(iota.at(e.source), e.symbol);
    auto stationary = unichain_stationary(p);
    return {Alphabet(a.state_names()), std::move(p), std::move(stationary)};
}

namespace {

SnakeDistribution finish(SnakeAutomaton snake, std::vector<double> closed_form, const StateChain& chain,
                         bool enforce) {
    SnakeDistribution out{std::move(snake), std::move(closed_form), chain.require_stationary(), 0.0};
    for (std::size_t i = 0; i < out.closed_form.size(); ++i)
        out.max_deviation = std::max(out.max_deviation, std::abs(out.closed_form[i] - out.eigensolved[i]));
    if (enforce && out.max_deviation > kSnakeAgreementTolerance)
        throw ValidationError("snake closed form disagrees with the eigensolve by " + std::to_string(out.max_deviation));
    return out;
}

}  // namespace

SnakeDistribution snake_distribution(const Automaton& a, std::size_t n) {
    const StateChain base = uniform_chain(a);
    const auto& pi = base.require_stationary();
    SnakeAutomaton snake = snake_automaton(a, n);
    const double scale = 1.0 / static_cast<double>(checked_pow(a.alphabet().size(), n));
    std::vector<double> closed(snake.base_state.size());
    for (std::size_t s = 0; s < closed.size(); ++s) closed[s] = pi[snake.base_state[s]] * scale;
    const StateChain chain = uniform_chain(snake.automaton);
    return finish(std::move(snake), std::move(closed), chain, true);
}

SnakeDistribution snake_distribution(const Automaton& a, const MarkovMeasure& mu, const CompatibilityWitness& witness,
                                     std::size_t n, SnakeWeighting weighting) {
    const StateChain base = compatible_chain(a, mu, witness.iota);
    const auto& pi = base.require_stationary();
    if (weighting == SnakeWeighting::Eta && witness.eta.size() != a.num_states())
        throw ValidationError("eta weighting needs a selector witness");
    SnakeAutomaton snake = snake_automaton(a, n);
    const auto& label = weighting == SnakeWeighting::Iota ? witness.iota : witness.eta;
    std::vector<double> closed(snake.base_state.size());
    for (std::size_t s = 0; s < closed.size(); ++s) {
        const StateId p = snake.base_state[s];
        closed[s] = pi[p] * conditional_word_measure(mu, label[p], snake.window[s]);
    }
    // Every snake transition into (q, w'a) reads a, so iota is the window's last symbol.
    std::vector<Symbol> snake_iota(snake.window.size());
    for (std::size_t s = 0; s < snake.window.size(); ++s) snake_iota[s] = snake.window[s].back();
    const StateChain chain = compatible_chain(snake.automaton, mu, snake_iota);
    return finish(std::move(snake), std::move(closed), chain, weighting == SnakeWeighting::Iota);
}

double lifted_run_measure(const Automaton& a, const StateChain& chain, const MarkovMeasure& mu,
                          const std::vector<Symbol>& iota, StateId p, const Word& u) {
    if (!run_end(a, p, u))
        throw UnrealizableRun("run from " + a.state_name(p) + " on " + a.alphabet().format_word(u) + " does not exist");
    return chain.require_stationary()[p] * conditional_word_measure(mu, iota.at(p), u);
}

StateFrequencyCounter::StateFrequencyCounter(const Automaton& a)
    : automaton_(&a), state_(a.initial()), counts_(a.num_states(), 0) {}

void StateFrequencyCounter::feed(Symbol sym) {
    const auto q = automaton_->next(state_, sym);
    if (!q) throw UndefinedTransition(automaton_->state_name(state_), automaton_->alphabet().token(sym), n_ + 1);
    ++counts_[state_];
    ++n_;
    state_ = *q;
}

StateFrequencyReport StateFrequencyCounter::report(const std::vector<double>& reference) const {
    StateFrequencyReport out;
    out.n = n_;
    out.counts = counts_;
    out.reference = reference;
    out.ratios.resize(counts_.size());
    for (std::size_t q = 0; q < counts_.size(); ++q) {
        out.ratios[q] = n_ ? static_cast<double>(counts_[q]) / static_cast<double>(n_) : 0.0;
        if (q < reference.size()) out.max_deviation = std::max(out.max_deviation, std::abs(out.ratios[q] - reference[q]));
    }
    return out;
}

StateFrequencyReport empirical_state_frequencies(const Automaton& a, const Word& x, std::size_t n,
                                                 const std::vector<double>& reference) {
    if (n > x.size()) throw ValidationError("prefix length exceeds the input");
    StateFrequencyCounter counter(a);
    for (std::size_t i = 0; i < n; ++i) counter.feed(x[i]);
    return counter.report(reference);
}

}  // namespace fsel
