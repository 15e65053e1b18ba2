#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsel/automaton.hpp"
#include "fsel/compatibility.hpp"
#include "fsel/measures.hpp"
#include "fsel/seqgen.hpp"

namespace fsel {

enum class GeneratorKind { Champernowne, MarkovSample };

struct ExperimentConfig {
    GeneratorKind generator = GeneratorKind::MarkovSample;
    std::uint64_t seed = 1;
    std::size_t n = 1'000'000;
    std::vector<std::size_t> ks{1, 2, 3};
    CountMode mode = CountMode::Sliding;
    double tolerance = 0.01;
    /// Restart counting once the run enters a recurrent component.
    bool after_recurrent = false;

    /// Throws ValidationError unless tolerance > 0, ks nonempty and n >= 100 max(k).
    void validate() const;
};

struct StreamFrequencies {
    std::size_t k = 0;
    std::optional<FrequencyReport> report;  // empty when the stream is shorter than k
    double discrepancy = 1.0;
};

enum class ExperimentStatus { Pass, ToleranceFailure, CompatibilityFailure };

struct ExperimentReport {
    bool markov_mode = false;
    std::vector<StreamFrequencies> input;
    std::vector<StreamFrequencies> output;
    std::size_t input_length = 0;
    std::size_t output_length = 0;
    std::optional<CompatibilityWitness> witness;
    std::vector<Violation> violations;
    /// Symbols consumed before the run first stood in a recurrent component.
    std::optional<std::size_t> recurrent_entry;
    /// Occurrences of zero-measure length-2 blocks (and null first symbols) in the output.
    std::size_t forbidden_output_blocks = 0;
    /// Total entries held by the block counters; independent of n.
    std::size_t counter_cells = 0;
    ExperimentStatus status = ExperimentStatus::Pass;
    std::string message;

    bool pass() const noexcept { return status == ExperimentStatus::Pass; }
};

/// Generates the input, streams it through the selector and measures block
/// frequencies of input and output against `mu`. In Markov mode the selector
/// must be oblivious and compatible with mu; in uniform mode (`markov_mode`
/// false, mu uniform) obliviousness is enough.
ExperimentReport run_experiment(const ExperimentConfig& config, const Selector& s, const Declarations& declarations,
                                const MarkovMeasure& mu, bool markov_mode);

struct CsvProvenance {
    std::string selector;
    std::string selector_hash;
    std::string measure;
};

/// `# key=value` header, one block table per stream and k, and a result footer.
void write_experiment_csv(std::ostream& out, const ExperimentConfig& config, const CsvProvenance& provenance,
                          const ExperimentReport& report, const Alphabet& alphabet, const MarkovMeasure& mu);

/// Rows `block,count,frequency[,target,abs_error]` in lexicographic block order.
void write_frequency_table(std::ostream& out, const FrequencyReport& report, const Alphabet& alphabet,
                           const MarkovMeasure* mu);

std::string format_general(double value);

}  // namespace fsel
