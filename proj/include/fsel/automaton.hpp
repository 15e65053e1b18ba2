#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsel/alphabet.hpp"
#include "fsel/graph.hpp"

namespace fsel {

using StateId = std::uint32_t;

/// KEEP copies the read symbol to the output (type I), DROP emits nothing (type II).
enum class Action : std::uint8_t { Keep, Drop };

std::string_view to_string(Action a) noexcept;

struct Edge {
    StateId source;
    Symbol symbol;
    StateId target;
};

// Deterministic automaton with a partial transition function. States are
// opaque names kept in declaration order; that order drives every
// deterministic iteration in the library.
class Automaton {
public:
    /// `delta` is row-major: delta[p * |A| + a]. Throws ValidationError on
    /// bad sizes or out-of-range targets.
    Automaton(Alphabet alphabet, std::vector<std::string> states, StateId initial,
              std::vector<std::optional<StateId>> delta);

    /// Throws ValidationError on duplicate (source, symbol).
    static Automaton from_edges(Alphabet alphabet, std::vector<std::string> states, StateId initial,
                                const std::vector<Edge>& edges);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t num_states() const noexcept { return states_.size(); }
    const std::vector<std::string>& state_names() const noexcept { return states_; }
    const std::string& state_name(StateId p) const { return states_.at(p); }
    /// Throws ValidationError for an undeclared state.
    StateId state_index(std::string_view name) const;
    StateId initial() const noexcept { return initial_; }

    std::optional<StateId> next(StateId p, Symbol a) const { return delta_[p * alphabet_.size() + a]; }
    std::vector<Edge> edges() const;

    /// First (state, symbol) pair without a transition, in declaration order.
    std::optional<std::pair<StateId, Symbol>> first_missing() const;
    bool is_complete() const { return !first_missing().has_value(); }

    /// Every state is reachable from the initial state and starts an infinite run.
    /// Computed once at construction.
    bool trim() const noexcept { return trim_; }

    /// Successor lists (deduplicated) for graph algorithms.
    Digraph graph() const;

    friend bool operator==(const Automaton&, const Automaton&) = default;

private:
    Alphabet alphabet_;
    std::vector<std::string> states_;
    StateId initial_ = 0;
    std::vector<std::optional<StateId>> delta_;
    bool trim_ = false;
};

struct Step {
    StateId target;
    Action action;
    friend bool operator==(const Step&, const Step&) = default;
};

// Deterministic transducer whose transitions either copy the read symbol or
// emit the empty word.
class Selector {
public:
    Selector(Automaton automaton, std::vector<Action> actions);
    Selector(Alphabet alphabet, std::vector<std::string> states, StateId initial,
             std::vector<std::optional<Step>> table);

    const Automaton& automaton() const noexcept { return automaton_; }
    const Alphabet& alphabet() const noexcept { return automaton_.alphabet(); }
    std::size_t num_states() const noexcept { return automaton_.num_states(); }
    const std::string& state_name(StateId p) const { return automaton_.state_name(p); }
    StateId state_index(std::string_view name) const { return automaton_.state_index(name); }
    StateId initial() const noexcept { return automaton_.initial(); }

    std::optional<Step> next(StateId p, Symbol a) const;

    /// Action shared by all outgoing transitions of p; nullopt when they are
    /// mixed or when p has none.
    std::optional<Action> state_action(StateId p) const;
    /// True when p has at least one KEEP and at least one DROP transition.
    bool mixed(StateId p) const;

    friend bool operator==(const Selector&, const Selector&) = default;

private:
    Automaton automaton_;
    std::vector<Action> actions_;  // parallel to the transition table; ignored where undefined
};

// Finite run p * u. visits[q] counts q as the source of a transition, so the
// counts sum to |input|.
struct Run {
    StateId start = 0;
    Word input;
    Word output;
    std::vector<std::size_t> visits;
    StateId end = 0;
};

/// Throws UndefinedTransition (1-based position) when the path falls off.
Run run_word(const Automaton& a, StateId p, const Word& u);
Run run_word(const Selector& s, StateId p, const Word& u);

/// End state p . u, or nullopt when the run does not exist.
std::optional<StateId> run_end(const Automaton& a, StateId p, const Word& u);

// Resumable streaming application of a selector. Single owner.
class SelectorCursor {
public:
    explicit SelectorCursor(const Selector& s) : SelectorCursor(s, s.initial()) {}
    SelectorCursor(const Selector& s, StateId start) : selector_(&s), state_(start) {}

    /// Consumes one symbol; returns it when selected. Throws UndefinedTransition
    /// reporting the 1-based position of the symbol.
    std::optional<Symbol> feed(Symbol a);

    StateId state() const noexcept { return state_; }
    std::size_t consumed() const noexcept { return consumed_; }

private:
    const Selector* selector_;
    StateId state_;
    std::size_t consumed_ = 0;
};

/// Batch convenience over SelectorCursor from the initial state.
Word apply_selector(const Selector& s, const Word& x);

struct ObliviousReport {
    bool oblivious = true;
    std::optional<StateId> witness;  // a state with mixed actions
};
ObliviousReport is_oblivious(const Selector& s);

struct SccReport {
    /// Reverse topological order of the condensation (sinks first).
    std::vector<std::vector<StateId>> components;
    std::vector<bool> recurrent;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::size_t> component_of;

    bool strongly_connected() const noexcept { return components.size() == 1; }
};
SccReport scc_decomposition(const Automaton& a);
SccReport scc_decomposition(const Selector& s);

// The automaton A^n whose states are the length-n runs p * w of A.
struct SnakeAutomaton {
    Automaton automaton;
    std::size_t n = 0;
    std::vector<StateId> base_state;  // p of each snake state
    std::vector<Word> window;         // w of each snake state

    /// Index of the snake state for (p, w), or nullopt if that run is not realizable.
    std::optional<StateId> find(StateId p, const Word& w) const;
};

/// Only realizable runs p * w become states. The initial state is the first
/// realizable (initial, w) in lexicographic order.
SnakeAutomaton snake_automaton(const Automaton& a, std::size_t n);

struct Dfa {
    Automaton automaton;
    std::vector<bool> accepting;
};

/// Outgoing transitions of accepting states become KEEP, all others DROP.
Selector dfa_to_selector(const Automaton& d, const std::vector<bool>& accepting);
/// Throws NotOblivious.
Dfa selector_to_dfa(const Selector& s);

/// Sub-selector on `states` (e.g. a recurrent component); transitions leaving
/// the set are removed. `initial` must belong to the set.
Selector restrict_selector(const Selector& s, const std::vector<StateId>& states, StateId initial);

}  // namespace fsel
