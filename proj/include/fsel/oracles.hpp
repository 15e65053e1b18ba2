#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fsel/automaton.hpp"
#include "fsel/compatibility.hpp"
#include "fsel/measures.hpp"

namespace fsel {

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

struct EnumeratedRun {
    Word input;
    Word output;
    StateId end;
};

struct RunEnumeration {
    StateId start = 0;
    std::size_t length = 0;
    /// Realizable runs, inputs in lexicographic order.
    std::vector<EnumeratedRun> runs;
};

/// Throws CapExceeded when #A^n exceeds `cap`.
RunEnumeration enumerate_runs(const Selector& s, StateId p, std::size_t n, std::size_t cap = kDefaultEnumerationCap);

enum class Inequality { Strict, NonStrict };

struct LemmaCheckResult {
    std::string lemma;
    StateId state = 0;
    std::size_t n = 0;
    Word w;
    double value = 0.0;
    double lower = 0.0;  // 0 for pure upper-bound checks
    double bound = 0.0;
    bool pass = false;
    /// Strongest form of the upper inequality that held.
    Inequality held = Inequality::NonStrict;
};

/// Number of runs in `e` whose output starts with w. Does not check any hypothesis.
std::size_t count_output_prefix(const RunEnumeration& e, const Word& w);

/// Run count with output prefix w against (#A)^{n-|w|}. Throws NotOblivious,
/// CapExceeded, ValidationError when |w| > n.
LemmaCheckResult count_output_prefix_runs(const Selector& s, StateId p, std::size_t n, const Word& w,
                                          std::size_t cap = kDefaultEnumerationCap);

inline constexpr double kMeasureBoundTolerance = 1e-12;

/// Sum of mu_{iota(p)}(u) over runs p * u whose output starts with w, against
/// mu_{eta(p)}(w) (+1e-12). Throws NotOblivious, CapExceeded.
LemmaCheckResult measure_output_prefix_runs(const Selector& s, const MarkovMeasure& mu,
                                            const CompatibilityWitness& witness, StateId p, std::size_t n,
                                            const Word& w, std::size_t cap = kDefaultEnumerationCap);

/// Same, reusing an enumeration of the runs from p.
double measure_output_prefix(const RunEnumeration& e, const MarkovMeasure& mu, Symbol start_label, const Word& w);

struct MarkovMode {
    const MarkovMeasure* mu;
    const CompatibilityWitness* witness;
};
using EquirunMode = std::variant<std::monostate, MarkovMode>;  // monostate = uniform

struct EquirunResult {
    std::optional<std::size_t> witness_n;
    /// Per-(p, w) checks at the witness n, or at n_max on failure.
    std::vector<LemmaCheckResult> checks;
};

/// Least n <= n_max at which every state p and every w in A^k satisfies
/// (1-eps) bound <= value <= bound. Throws NotStronglyConnected, NotOblivious, CapExceeded.
EquirunResult equirun_scan(const Selector& s, std::size_t k, double epsilon, std::size_t n_max,
                           const EquirunMode& mode = {}, std::size_t cap = kDefaultEnumerationCap);

/// Literal x|L: keeps x[i] iff the DFA accepts x[1:i-1], re-running the DFA
/// from the initial state for every prefix.
Word brute_force_prefix_selection(const Word& x, const Automaton& dfa, const std::vector<bool>& accepting);

}  // namespace fsel
