#include "fsel/automaton.hpp"

#include <algorithm>
#include <map>

#include "fsel/error.hpp"

namespace fsel {

std::string_view to_string(Action a) noexcept { return a == Action::Keep ? "keep" : "drop"; }

namespace {

// States from which an infinite run exists: repeatedly discard states whose
// remaining successors are all discarded.
std::vector<bool> has_infinite_run(const Digraph& g) {
    const std::size_t n = g.size();
    std::vector<bool> alive(n, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            const bool any = std::any_of(g[v].begin(), g[v].end(), [&](std::size_t w) { return alive[w]; });
            if (!any) {
                alive[v] = false;
                changed = true;
            }
        }
    }
    return alive;
}

}  // namespace

Automaton::Automaton(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                     std::vector<std::optional<StateId>> delta)
    : alphabet_(std::move(alphabet)), states_(std::move(states)), initial_(initial), delta_(std::move(delta)) {
    if (states_.empty()) throw ValidationError("automaton needs at least one state");
    if (initial_ >= states_.size()) throw ValidationError("initial state out of range");
    if (delta_.size() != states_.size() * alphabet_.size())
        throw ValidationError("transition table size does not match states x alphabet");
    {
        std::vector<std::string> sorted = states_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError("duplicate state name");
    }
    for (const auto& t : delta_)
        if (t && *t >= states_.size()) throw ValidationError("transition target out of range");

    const Digraph g = graph();
    const auto reach = reachable_from(g, initial_);
    const auto infinite = has_infinite_run(g);
    trim_ = std::all_of(reach.begin(), reach.end(), [](bool b) { return b; }) &&
            std::all_of(infinite.begin(), infinite.end(), [](bool b) { return b; });
}

Automaton Automaton::from_edges(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                                const std::vector<Edge>& edges) {
    const std::size_t k = alphabet.size();
    std::vector<std::optional<StateId>> delta(states.size() * k);
    for (const auto& e : edges) {
        if (e.source >= states.size() || e.symbol >= k) throw ValidationError("edge out of range");
        auto& slot = delta[e.source * k + e.symbol];
        if (slot) throw ValidationError("duplicate transition from " + states[e.source] + " on " +
                                        alphabet.token(e.symbol));
        slot = e.target;
    }
    return Automaton(std::move(alphabet), std::move(states), initial, std::move(delta));
}

StateId Automaton::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i] == name) return static_cast<StateId>(i);
    throw ValidationError("unknown state '" + std::string(name) + "'");
}

std::vector<Edge> Automaton::edges() const {
    std::vector<Edge> out;
    const std::size_t k = alphabet_.size();
    for (StateId p = 0; p < states_.size(); ++p)
        for (Symbol a = 0; a < k; ++a)
            if (auto q = next(p, a)) out.push_back({p, a, *q});
    return out;
}

std::optional<std::pair<StateId, Symbol>> Automaton::first_missing() const {
    const std::size_t k = alphabet_.size();
    for (StateId p = 0; p < states_.size(); ++p)
        for (Symbol a = 0; a < k; ++a)
            if (!next(p, a)) return std::pair{p, a};
    return std::nullopt;
}

Digraph Automaton::graph() const {
    Digraph g(states_.size());
    for (const auto& e : edges()) g[e.source].push_back(e.target);
    for (auto& succ : g) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    return g;
}

Selector::Selector(Automaton automaton, std::vector<Action> actions)
    : automaton_(std::move(automaton)), actions_(std::move(actions)) {
    const std::size_t k = automaton_.alphabet().size();
    if (actions_.size() != automaton_.num_states() * k)
        throw ValidationError("action table size does not match states x alphabet");
    for (StateId p = 0; p < automaton_.num_states(); ++p)
        for (Symbol a = 0; a < k; ++a)
            if (!automaton_.next(p, a)) actions_[p * k + a] = Action::Drop;
}

namespace {

Automaton strip_actions(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                        const std::vector<std::optional<Step>>& table) {
    std::vector<std::optional<StateId>> delta(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table[i]) delta[i] = table[i]->target;
    return Automaton(std::move(alphabet), std::move(states), initial, std::move(delta));
}

std::vector<Action> actions_of(const std::vector<std::optional<Step>>& table) {
    std::vector<Action> out(table.size(), Action::Drop);
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table[i]) out[i] = table[i]->action;
    return out;
}

}  // namespace

Selector::Selector(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                   std::vector<std::optional<Step>> table)
    : Selector(strip_actions(std::move(alphabet), std::move(states), initial, table), actions_of(table)) {}

std::optional<Step> Selector::next(StateId p, Symbol a) const {
    const auto q = automaton_.next(p, a);
    if (!q) return std::nullopt;
    return Step{*q, actions_[p * automaton_.alphabet().size() + a]};
}

std::optional<Action> Selector::state_action(StateId p) const {
    std::optional<Action> common;
    for (Symbol a = 0; a < alphabet().size(); ++a) {
        const auto step = next(p, a);
        if (!step) continue;
        if (common && *common != step->action) return std::nullopt;
        common = step->action;
    }
    return common;
}

bool Selector::mixed(StateId p) const {
    bool keep = false, drop = false;
    for (Symbol a = 0; a < alphabet().size(); ++a)
        if (const auto step = next(p, a)) (step->action == Action::Keep ? keep : drop) = true;
    return keep && drop;
}

namespace {

[[noreturn]] void fall_off(const Automaton& a, StateId p, Symbol sym, std::size_t position) {
    throw UndefinedTransition(a.state_name(p), a.alphabet().token(sym), position);
}

void check_symbols(const Alphabet& alphabet, const Word& u) {
    for (Symbol a : u)
        if (a >= alphabet.size()) throw UnknownSymbol("#" + std::to_string(a));
}

}  // namespace

Run run_word(const Automaton& a, StateId p, const Word& u) {
    check_symbols(a.alphabet(), u);
    Run run{p, u, {}, std::vector<std::size_t>(a.num_states(), 0), p};
    StateId cur = p;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto q = a.next(cur, u[i]);
        if (!q) fall_off(a, cur, u[i], i + 1);
        ++run.visits[cur];
        cur = *q;
    }
    run.end = cur;
    return run;
}

Run run_word(const Selector& s, StateId p, const Word& u) {
    check_symbols(s.alphabet(), u);
    Run run{p, u, {}, std::vector<std::size_t>(s.num_states(), 0), p};
    StateId cur = p;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto step = s.next(cur, u[i]);
        if (!step) fall_off(s.automaton(), cur, u[i], i + 1);
        ++run.visits[cur];
        if (step->action == Action::Keep) run.output.push_back(u[i]);
        cur = step->target;
    }
    run.end = cur;
    return run;
}

std::optional<StateId> run_end(const Automaton& a, StateId p, const Word& u) {
    StateId cur = p;
    for (Symbol sym : u) {
        const auto q = a.next(cur, sym);
        if (!q) return std::nullopt;
        cur = *q;
    }
    return cur;
}

std::optional<Symbol> SelectorCursor::feed(Symbol a) {
    if (a >= selector_->alphabet().size()) throw UnknownSymbol("#" + std::to_string(a));
    const auto step = selector_->next(state_, a);
    if (!step) fall_off(selector_->automaton(), state_, a, consumed_ + 1);
    ++consumed_;
    state_ = step->target;
    if (step->action == Action::Keep) return a;
    return std::nullopt;
}

Word apply_selector(const Selector& s, const Word& x) {
    SelectorCursor cursor(s);
    Word out;
    for (Symbol a : x)
        if (auto kept = cursor.feed(a)) out.push_back(*kept);
    return out;
}

ObliviousReport is_oblivious(const Selector& s) {
    for (StateId p = 0; p < s.num_states(); ++p)
        if (s.mixed(p)) return {false, p};
    return {};
}

SccReport scc_decomposition(const Automaton& a) {
    const Condensation c = condense(a.graph());
    SccReport report;
    for (const auto& comp : c.components) {
        std::vector<StateId> states(comp.begin(), comp.end());
        report.components.push_back(std::move(states));
    }
    report.recurrent = c.closed;
    report.edges = c.edges;
    report.component_of = c.component_of;
    return report;
}

SccReport scc_decomposition(const Selector& s) { return scc_decomposition(s.automaton()); }

std::optional<StateId> SnakeAutomaton::find(StateId p, const Word& w) const {
    for (std::size_t i = 0; i < base_state.size(); ++i)
        if (base_state[i] == p && window[i] == w) return static_cast<StateId>(i);
    return std::nullopt;
}

SnakeAutomaton snake_automaton(const Automaton& a, std::size_t n) {
    if (n == 0) throw ValidationError("snake length must be positive");
    const std::size_t k = a.alphabet().size();
    const std::size_t words = checked_pow(k, n);

    SnakeAutomaton snake{a, n, {}, {}};
    std::map<std::pair<StateId, std::size_t>, StateId> index;  // (p, rank(w)) -> snake state
    std::vector<std::string> names;
    for (StateId p = 0; p < a.num_states(); ++p) {
        for (std::size_t r = 0; r < words; ++r) {
            Word w = unrank_word(r, k, n);
            if (!run_end(a, p, w)) continue;
            index.emplace(std::pair{p, r}, static_cast<StateId>(snake.base_state.size()));
            std::string name = a.state_name(p) + "*";
            for (std::size_t i = 0; i < w.size(); ++i) name += (i && !a.alphabet().single_char() ? "." : "") + a.alphabet().token(w[i]);
            names.push_back(std::move(name));
            snake.base_state.push_back(p);
            snake.window.push_back(std::move(w));
        }
    }
    if (snake.base_state.empty()) throw ValidationError("automaton has no realizable run of the requested length");

    // (p, b w') --a--> (p.b, w' a) when both runs exist.
    std::vector<std::optional<StateId>> delta(snake.base_state.size() * k);
    for (StateId s = 0; s < snake.base_state.size(); ++s) {
        const StateId p = snake.base_state[s];
        const Word& w = snake.window[s];
        const StateId q = *a.next(p, w.front());
        for (Symbol sym = 0; sym < k; ++sym) {
            Word shifted(w.begin() + 1, w.end());
            shifted.push_back(sym);
            const auto it = index.find({q, rank_word(shifted, k)});
            if (it != index.end()) delta[s * k + sym] = it->second;
        }
    }

    StateId initial = 0;
    for (StateId s = 0; s < snake.base_state.size(); ++s)
        if (snake.base_state[s] == a.initial()) {
            initial = s;
            break;
        }
    snake.automaton = Automaton(a.alphabet(), std::move(names), initial, std::move(delta));
    return snake;
}

Selector dfa_to_selector(const Automaton& d, const std::vector<bool>& accepting) {
    if (accepting.size() != d.num_states()) throw ValidationError("accepting set size mismatch");
    const std::size_t k = d.alphabet().size();
    std::vector<Action> actions(d.num_states() * k);
    for (StateId p = 0; p < d.num_states(); ++p)
        for (Symbol a = 0; a < k; ++a) actions[p * k + a] = accepting[p] ? Action::Keep : Action::Drop;
    return Selector(d, std::move(actions));
}

Dfa selector_to_dfa(const Selector& s) {
    const auto report = is_oblivious(s);
    if (!report.oblivious) throw NotOblivious(s.state_name(*report.witness));
    std::vector<bool> accepting(s.num_states());
    for (StateId p = 0; p < s.num_states(); ++p) accepting[p] = s.state_action(p) == Action::Keep;
    return {s.automaton(), std::move(accepting)};
}

Selector restrict_selector(const Selector& s, const std::vector<StateId>& states, StateId initial) {
    std::vector<std::optional<StateId>> renumber(s.num_states());
    std::vector<std::string> names;
    for (StateId p : states) {
        renumber[p] = static_cast<StateId>(names.size());
        names.push_back(s.state_name(p));
    }
    if (!renumber.at(initial)) throw ValidationError("initial state outside the restriction");
    const std::size_t k = s.alphabet().size();
    std::vector<std::optional<Step>> table(names.size() * k);
    for (StateId p : states)
        for (Symbol a = 0; a < k; ++a)
            if (const auto step = s.next(p, a); step && renumber[step->target])
                table[*renumber[p] * k + a] = Step{*renumber[step->target], step->action};
    return Selector(s.alphabet(), std::move(names), *renumber[initial], std::move(table));
}

}  // namespace fsel
