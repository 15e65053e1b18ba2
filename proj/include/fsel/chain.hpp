#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

#include "fsel/automaton.hpp"
#include "fsel/compatibility.hpp"
#include "fsel/measures.hpp"

namespace fsel {

// Markov chain on the states of an automaton.
struct StateChain {
    /// State names, used as labels in printed reports.
    Alphabet states;
    Matrix transition;
    /// Present when the chain has a single recurrent class; transient states get 0.
    std::optional<std::vector<double>> stationary;

    /// Throws NotIrreducible when no unique stationary distribution exists.
    const std::vector<double>& require_stationary() const;
};

/// Stationary distribution of a (sub)stochastic matrix whose pattern has
/// exactly one closed class; mass on transient states is zero.
std::optional<std::vector<double>> unichain_stationary(const Matrix& p);

/// Entry (p, q) = #{a : p.a = q} / #A. Throws Incomplete.
StateChain uniform_chain(const Automaton& a);

/// Entry (p, q) = P_{iota(p) a} for the transition p -a-> q. Throws NotShiftComplete.
StateChain compatible_chain(const Automaton& a, const MarkovMeasure& mu, const std::vector<Symbol>& iota);

/// Which conditional measure weights the window of a snake state (p, w):
/// mu_{iota(p)} (run weighting, stationary for the snake chain) or mu_{eta(p)}.
enum class SnakeWeighting { Iota, Eta };

struct SnakeDistribution {
    SnakeAutomaton snake;
    std::vector<double> closed_form;
    /// Stationary distribution of the snake chain.
    std::vector<double> eigensolved;
    double max_deviation = 0.0;
};

inline constexpr double kSnakeAgreementTolerance = 1e-9;

/// xi(p * w) = pi_p / #A^n. Throws NotIrreducible, or ValidationError when the
/// closed form and the eigensolve disagree by more than 1e-9.
SnakeDistribution snake_distribution(const Automaton& a, std::size_t n);

/// xi(p * w) = pi_p mu_{label(p)}(w) with label = iota or eta. The agreement
/// check against the eigensolve is enforced for the iota weighting only.
SnakeDistribution snake_distribution(const Automaton& a, const MarkovMeasure& mu, const CompatibilityWitness& witness,
                                     std::size_t n, SnakeWeighting weighting = SnakeWeighting::Iota);

/// pi_p * mu_{iota(p)}(u). Throws UnrealizableRun when p * u does not exist.
double lifted_run_measure(const Automaton& a, const StateChain& chain, const MarkovMeasure& mu,
                          const std::vector<Symbol>& iota, StateId p, const Word& u);

struct StateFrequencyReport {
    std::size_t n = 0;
    std::vector<std::size_t> counts;
    std::vector<double> ratios;
    std::vector<double> reference;
    double max_deviation = 0.0;
};

// Streaming counter of source-state occurrences along the run from the
// initial state.
class StateFrequencyCounter {
public:
    explicit StateFrequencyCounter(const Automaton& a);
    /// Throws UndefinedTransition.
    void feed(Symbol sym);
    StateFrequencyReport report(const std::vector<double>& reference) const;

private:
    const Automaton* automaton_;
    StateId state_;
    std::size_t n_ = 0;
    std::vector<std::size_t> counts_;
};

/// Counts over x[1:n] against the reference distribution.
StateFrequencyReport empirical_state_frequencies(const Automaton& a, const Word& x, std::size_t n,
                                                 const std::vector<double>& reference);

/// Same over the first n symbols drawn from `next_symbol`.
template <typename Source>
    requires std::invocable<Source&>
StateFrequencyReport empirical_state_frequencies(const Automaton& a, Source&& next_symbol, std::size_t n,
                                                 const std::vector<double>& reference) {
    StateFrequencyCounter counter(a);
    for (std::size_t i = 0; i < n; ++i) counter.feed(next_symbol());
    return counter.report(reference);
}

}  // namespace fsel
