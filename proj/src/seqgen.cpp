#include "fsel/seqgen.hpp"

#include <algorithm>
#include <cmath>

#include "fsel/error.hpp"

namespace fsel {

std::uint64_t SplitMix64::next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

Symbol sample_index(const std::vector<double>& weights, double u) {
    double cumulative = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = i;
        cumulative += weights[i];
        if (u < cumulative) return static_cast<Symbol>(i);
    }
    return static_cast<Symbol>(last_positive);
}

ChampernowneGenerator::ChampernowneGenerator(std::size_t alphabet_size) : base_(alphabet_size), current_(1, 0) {
    if (base_ == 0) throw ValidationError("empty alphabet");
}

Symbol ChampernowneGenerator::next() {
    if (pos_ == current_.size()) {
        // Lexicographic successor; after the last word of a length, the first of the next.
        std::size_t i = current_.size();
        while (i > 0 && current_[i - 1] + 1 == base_) current_[--i] = 0;
        if (i == 0)
            current_.assign(current_.size() + 1, 0);
        else
            ++current_[i - 1];
        pos_ = 0;
    }
    return current_[pos_++];
}

Word champernowne(const Alphabet& alphabet, std::size_t n) {
    ChampernowneGenerator gen(alphabet.size());
    Word out(n);
    for (auto& s : out) s = gen.next();
    return out;
}

MarkovSampler::MarkovSampler(const MarkovMeasure& mu, std::uint64_t seed) : mu_(&mu), rng_(seed) {
    for (Symbol a = 0; a < mu.alphabet().size(); ++a) rows_.push_back(mu.transition().entries().row(a));
}

Symbol MarkovSampler::next() {
    const auto& weights = started_ ? rows_[prev_] : mu_->pi().weights();
    const Symbol s = sample_index(weights, rng_.uniform());
    if (s >= weights.size()) throw DeadEnd(started_ ? mu_->alphabet().token(prev_) : std::string("pi"));
    started_ = true;
    prev_ = s;
    return s;
}

Word sample_markov(const MarkovMeasure& mu, std::uint64_t seed, std::size_t n) {
    MarkovSampler sampler(mu, seed);
    Word out(n);
    for (auto& s : out) s = sampler.next();
    return out;
}

std::size_t FrequencyReport::total() const noexcept {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

double FrequencyReport::frequency(std::size_t rank) const noexcept {
    const std::size_t t = total();
    return t ? static_cast<double>(counts[rank]) / static_cast<double>(t) : 0.0;
}

BlockCounter::BlockCounter(std::size_t alphabet_size, std::size_t k, CountMode mode)
    : base_(alphabet_size), k_(k), mode_(mode), modulus_(checked_pow(alphabet_size, k ? k - 1 : 0)) {
    if (k == 0) throw BlockLengthOutOfRange(0, 0);
    counts_.assign(checked_pow(alphabet_size, k), 0);
}

void BlockCounter::push(Symbol a) {
    ++n_;
    if (mode_ == CountMode::Sliding) {
        window_ = (window_ % modulus_) * base_ + a;
        if (n_ >= k_) ++counts_[window_];
    } else {
        window_ = window_ * base_ + a;
        if (n_ % k_ == 0) {
            ++counts_[window_];
            window_ = 0;
        }
    }
}

FrequencyReport BlockCounter::report() const {
    if (n_ < k_) throw BlockLengthOutOfRange(k_, n_);
    return {mode_, k_, n_, base_, counts_};
}

FrequencyReport block_frequencies(std::size_t alphabet_size, const Word& x, std::size_t k, CountMode mode) {
    if (k == 0 || k > x.size()) throw BlockLengthOutOfRange(k, x.size());
    BlockCounter counter(alphabet_size, k, mode);
    for (Symbol a : x) counter.push(a);
    return counter.report();
}

double discrepancy(const FrequencyReport& report, const MarkovMeasure& mu) {
    if (report.alphabet_size != mu.alphabet().size()) throw ValidationError("report and measure alphabets differ");
    double worst = 0.0;
    for (std::size_t r = 0; r < report.counts.size(); ++r)
        worst = std::max(worst, std::abs(report.frequency(r) - word_measure(mu, report.block(r))));
    return worst;
}

}  // namespace fsel
