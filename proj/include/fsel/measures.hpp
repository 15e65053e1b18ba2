#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fsel/alphabet.hpp"

namespace fsel {

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    /// Throws ValidationError on ragged input.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::vector<double> row(std::size_t i) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kStationarityTolerance = 1e-10;

/// First pair (i, j) such that j is not reachable from i in the nonzero
/// pattern of m; nullopt when the pattern is strongly connected.
std::optional<std::pair<std::size_t, std::size_t>> unreachable_pair(const Matrix& m);

/// Some power m^n with n <= size^2 is entrywise positive.
bool is_primitive(const Matrix& m);

/// x P for a row vector x.
std::vector<double> left_multiply(const std::vector<double>& x, const Matrix& p);

// Probability weights over labelled outcomes (symbols or automaton states).
class Distribution {
public:
    /// Throws WeightsNotNormalized unless weights are nonnegative and sum to 1 within 1e-12.
    Distribution(Alphabet labels, std::vector<double> weights);

    const Alphabet& labels() const noexcept { return labels_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::size_t size() const noexcept { return weights_.size(); }

private:
    Alphabet labels_;
    std::vector<double> weights_;
};

class StochasticMatrix {
public:
    /// Throws ValidationError unless square, nonnegative and every row sums
    /// to 1 within 1e-12.
    StochasticMatrix(Alphabet labels, Matrix entries);

    const Alphabet& labels() const noexcept { return labels_; }
    const Matrix& entries() const noexcept { return entries_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
    std::size_t size() const noexcept { return entries_.rows(); }

private:
    Alphabet labels_;
    Matrix entries_;
};

// Markov measure mu_{pi,P}.
class MarkovMeasure {
public:
    /// Throws ValidationError when alphabets differ or ||pi P - pi||_inf > 1e-10.
    MarkovMeasure(Distribution pi, StochasticMatrix p);

    const Alphabet& alphabet() const noexcept { return pi_.labels(); }
    const Distribution& pi() const noexcept { return pi_; }
    const StochasticMatrix& transition() const noexcept { return p_; }
    double pi(Symbol a) const { return pi_[a]; }
    double p(Symbol a, Symbol b) const { return p_(a, b); }

    /// Symbols with zero stationary mass; they lie outside the support.
    std::vector<Symbol> null_symbols() const;

private:
    Distribution pi_;
    StochasticMatrix p_;
};

// Matrix presentation of a shift of finite type; zero entries are the
// forbidden length-2 blocks.
class SftSpec {
public:
    SftSpec(Alphabet alphabet, Matrix m);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const Matrix& matrix() const noexcept { return m_; }
    bool irreducible() const noexcept { return irreducible_; }
    bool aperiodic() const noexcept { return aperiodic_; }

private:
    Alphabet alphabet_;
    Matrix m_;
    bool irreducible_ = false;
    bool aperiodic_ = false;
};

/// pi_{w1} P_{w1 w2} ... ; 1 for the empty word.
double word_measure(const MarkovMeasure& mu, const Word& w);
/// P_{a w1} P_{w1 w2} ... ; 1 for the empty word.
double conditional_word_measure(const MarkovMeasure& mu, Symbol a, const Word& w);

/// Unique pi with pi P = pi. Throws NotIrreducible.
Distribution stationary_distribution(const StochasticMatrix& p);
/// Same solve on a raw matrix, used for chains over automaton states.
/// The pattern of p must be strongly connected.
std::vector<double> stationary_vector(const Matrix& p);

struct PerronPair {
    double theta = 0.0;
    std::vector<double> right;  // max-norm 1
    std::vector<double> left;   // scaled so that sum(left * right) = 1
    std::size_t iterations = 0;
};

inline constexpr std::size_t kPerronMaxIterations = 1'000'000;
inline constexpr double kPerronStepTolerance = 1e-13;

/// Power iteration for the Perron eigenvalue and eigenvectors of an
/// irreducible nonnegative matrix. Periodic matrices are shifted by the
/// identity first. Throws NotIrreducible or NonConvergence.
PerronPair perron_eigen(const Matrix& m, std::size_t max_iterations = kPerronMaxIterations);

struct ParryMeasure {
    MarkovMeasure measure;
    double theta;
};

/// P_ij = M_ij r_j / (theta r_i), pi_i = l_i r_i.
ParryMeasure parry_measure(const SftSpec& s);

/// Throws WeightsNotNormalized.
MarkovMeasure make_bernoulli(const Alphabet& alphabet, const std::vector<double>& weights);
MarkovMeasure make_uniform(const Alphabet& alphabet);

/// Length-2 blocks ab with P_ab = 0, lexicographic.
std::vector<Word> support_forbidden_blocks(const MarkovMeasure& mu);
/// pi_{w1} > 0 and every step along w has positive probability. True for the empty word.
bool word_in_support(const MarkovMeasure& mu, const Word& w);

}  // namespace fsel
