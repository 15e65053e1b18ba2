#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fsel/alphabet.hpp"
#include "fsel/measures.hpp"

namespace fsel {

// splitmix64: the state advances by the golden-ratio increment and each output
// is the mixed state. Bit-exact across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    std::uint64_t next() noexcept;
    /// Top 53 bits scaled to [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Inverse CDF over weights in index order. Returns the last positive-weight
/// index when rounding leaves u above the cumulative total.
Symbol sample_index(const std::vector<double>& weights, double u);

// Concatenation of all nonempty words by length, then lexicographically.
class ChampernowneGenerator {
public:
    explicit ChampernowneGenerator(std::size_t alphabet_size);
    Symbol next();

private:
    std::size_t base_;
    Word current_;
    std::size_t pos_ = 0;
};

Word champernowne(const Alphabet& alphabet, std::size_t n);

// Draws the first symbol from pi and each next one from the row of the previous.
class MarkovSampler {
public:
    MarkovSampler(const MarkovMeasure& mu, std::uint64_t seed);
    /// Throws DeadEnd.
    Symbol next();

private:
    const MarkovMeasure* mu_;
    SplitMix64 rng_;
    std::vector<std::vector<double>> rows_;
    bool started_ = false;
    Symbol prev_ = 0;
};

Word sample_markov(const MarkovMeasure& mu, std::uint64_t seed, std::size_t n);

enum class CountMode { Sliding, Aligned };

struct FrequencyReport {
    CountMode mode = CountMode::Sliding;
    std::size_t k = 0;
    std::size_t n = 0;  // symbols consumed
    std::size_t alphabet_size = 0;
    /// Indexed by the rank of the block (lexicographic), zero counts included.
    std::vector<std::size_t> counts;

    std::size_t total() const noexcept;
    double frequency(std::size_t rank) const noexcept;
    Word block(std::size_t rank) const { return unrank_word(rank, alphabet_size, k); }
};

// Streaming block counter with memory O(#A^k).
class BlockCounter {
public:
    BlockCounter(std::size_t alphabet_size, std::size_t k, CountMode mode);
    void push(Symbol a);
    /// Throws BlockLengthOutOfRange when fewer than k symbols were pushed.
    FrequencyReport report() const;
    std::size_t table_size() const noexcept { return counts_.size(); }
    std::size_t consumed() const noexcept { return n_; }

private:
    std::size_t base_;
    std::size_t k_;
    CountMode mode_;
    std::size_t modulus_;  // base^(k-1)
    std::size_t window_ = 0;
    std::size_t n_ = 0;
    std::vector<std::size_t> counts_;
};

/// Throws BlockLengthOutOfRange unless 1 <= k <= |x|.
FrequencyReport block_frequencies(std::size_t alphabet_size, const Word& x, std::size_t k, CountMode mode);

/// max over all length-k blocks of |frequency - mu(block)|.
double discrepancy(const FrequencyReport& report, const MarkovMeasure& mu);

}  // namespace fsel
