#include "fsel/oracles.hpp"

#include <cmath>

#include "fsel/error.hpp"

namespace fsel {

namespace {

void enumerate_from(const Selector& s, StateId state, std::size_t remaining, Word& input, Word& output,
                    std::vector<EnumeratedRun>& runs) {
    if (remaining == 0) {
        runs.push_back({input, output, state});
        return;
    }
    for (Symbol a = 0; a < s.alphabet().size(); ++a) {
        const auto step = s.next(state, a);
        if (!step) continue;
        input.push_back(a);
        if (step->action == Action::Keep) output.push_back(a);
        enumerate_from(s, step->target, remaining - 1, input, output, runs);
        if (step->action == Action::Keep) output.pop_back();
        input.pop_back();
    }
}

void require_oblivious(const Selector& s) {
    const auto report = is_oblivious(s);
    if (!report.oblivious) throw NotOblivious(s.state_name(*report.witness));
}

}  // namespace

RunEnumeration enumerate_runs(const Selector& s, StateId p, std::size_t n, std::size_t cap) {
    const std::size_t total = checked_pow(s.alphabet().size(), n);
    if (total > cap) throw CapExceeded(total, cap);
    RunEnumeration e{p, n, {}};
    e.runs.reserve(total);
    Word input, output;
    enumerate_from(s, p, n, input, output, e.runs);
    return e;
}

std::size_t count_output_prefix(const RunEnumeration& e, const Word& w) {
    std::size_t count = 0;
    for (const auto& r : e.runs)
        if (is_prefix(w, r.output)) ++count;
    return count;
}

LemmaCheckResult count_output_prefix_runs(const Selector& s, StateId p, std::size_t n, const Word& w,
                                          std::size_t cap) {
    require_oblivious(s);
    if (w.size() > n) throw ValidationError("prefix longer than the run length");
    const auto e = enumerate_runs(s, p, n, cap);
    const std::size_t count = count_output_prefix(e, w);
    const std::size_t bound = checked_pow(s.alphabet().size(), n - w.size());
    LemmaCheckResult r;
    r.lemma = "upper";
    r.state = p;
    r.n = n;
    r.w = w;
    r.value = static_cast<double>(count);
    r.bound = static_cast<double>(bound);
    r.pass = count <= bound;
    r.held = count < bound ? Inequality::Strict : Inequality::NonStrict;
    return r;
}

double measure_output_prefix(const RunEnumeration& e, const MarkovMeasure& mu, Symbol start_label, const Word& w) {
    double total = 0.0;
    for (const auto& r : e.runs)
        if (is_prefix(w, r.output)) total += conditional_word_measure(mu, start_label, r.input);
    return total;
}

LemmaCheckResult measure_output_prefix_runs(const Selector& s, const MarkovMeasure& mu,
                                            const CompatibilityWitness& witness, StateId p, std::size_t n,
                                            const Word& w, std::size_t cap) {
    require_oblivious(s);
    if (w.size() > n) throw ValidationError("prefix longer than the run length");
    if (witness.eta.size() != s.num_states() || witness.iota.size() != s.num_states())
        throw NotCompatible("witness does not cover the selector's states");
    const auto e = enumerate_runs(s, p, n, cap);
    LemmaCheckResult r;
    r.lemma = "markov-upper";
    r.state = p;
    r.n = n;
    r.w = w;
    r.value = measure_output_prefix(e, mu, witness.iota[p], w);
    r.bound = conditional_word_measure(mu, witness.eta[p], w);
    r.pass = r.value <= r.bound + kMeasureBoundTolerance;
    r.held = r.value < r.bound ? Inequality::Strict : Inequality::NonStrict;
    return r;
}

EquirunResult equirun_scan(const Selector& s, std::size_t k, double epsilon, std::size_t n_max,
                           const EquirunMode& mode, std::size_t cap) {
    require_oblivious(s);
    if (!scc_decomposition(s).strongly_connected()) throw NotStronglyConnected();
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
    const auto* markov = std::get_if<MarkovMode>(&mode);
    const std::size_t alphabet_size = s.alphabet().size();
    const auto words = all_words(alphabet_size, k);

    EquirunResult result;
    for (std::size_t n = k; n <= n_max; ++n) {
        std::vector<LemmaCheckResult> checks;
        bool all = true;
        for (StateId p = 0; p < s.num_states(); ++p) {
            const auto e = enumerate_runs(s, p, n, cap);
            for (const auto& w : words) {
                LemmaCheckResult r;
                r.state = p;
                r.n = n;
                r.w = w;
                if (markov) {
                    r.lemma = "markov-equirun";
                    r.value = measure_output_prefix(e, *markov->mu, markov->witness->iota[p], w);
                    r.bound = conditional_word_measure(*markov->mu, markov->witness->eta[p], w);
                    r.lower = (1.0 - epsilon) * r.bound;
                    r.pass = r.value >= r.lower - kMeasureBoundTolerance && r.value <= r.bound + kMeasureBoundTolerance;
                } else {
                    r.lemma = "equirun";
                    r.value = static_cast<double>(count_output_prefix(e, w));
                    r.bound = static_cast<double>(checked_pow(alphabet_size, n - k));
                    r.lower = (1.0 - epsilon) * r.bound;
                    r.pass = r.value >= r.lower && r.value <= r.bound;
                }
                r.held = r.value < r.bound ? Inequality::Strict : Inequality::NonStrict;
                all = all && r.pass;
                checks.push_back(std::move(r));
            }
        }
        result.checks = std::move(checks);
        if (all) {
            result.witness_n = n;
            return result;
        }
    }
    return result;
}

Word brute_force_prefix_selection(const Word& x, const Automaton& dfa, const std::vector<bool>& accepting) {
    Word out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Word prefix(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i));
        std::optional<StateId> state = dfa.initial();
        for (Symbol a : prefix) {
            state = dfa.next(*state, a);
            if (!state) break;
        }
        if (state && accepting.at(*state)) out.push_back(x[i]);
    }
    return out;
}

}  // namespace fsel
