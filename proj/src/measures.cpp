#include "fsel/measures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fsel/error.hpp"
#include "fsel/graph.hpp"

namespace fsel {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    const std::size_t m = n ? rows.front().size() : 0;
    Matrix out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m) throw ValidationError("ragged matrix rows");
        for (std::size_t j = 0; j < m; ++j) out(i, j) = rows[i][j];
    }
    return out;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

std::vector<double> Matrix::row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

namespace {

Digraph pattern_graph(const Matrix& m) {
    Digraph g(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) > 0.0) g[i].push_back(j);
    return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double max_norm(const std::vector<double>& v) {
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x));
    return d;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

std::vector<double> multiply(const Matrix& m, const std::vector<double>& x) {
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
    return y;
}

void require_irreducible(const Matrix& m, const Alphabet* labels) {
    if (const auto pair = unreachable_pair(m)) {
        const auto name = [&](std::size_t i) { return labels ? labels->token(static_cast<Symbol>(i)) : std::to_string(i); };
        throw NotIrreducible(name(pair->first), name(pair->second));
    }
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> unreachable_pair(const Matrix& m) {
    const Digraph g = pattern_graph(m);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto seen = reachable_from(g, i);
        for (std::size_t j = 0; j < g.size(); ++j)
            if (!seen[j]) return std::pair{i, j};
    }
    // A lone vertex without a self-loop is not irreducible.
    if (g.size() == 1 && g[0].empty()) return std::pair{std::size_t{0}, std::size_t{0}};
    return std::nullopt;
}

bool is_primitive(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n == 0 || unreachable_pair(m)) return false;
    std::vector<std::vector<bool>> base(n, std::vector<bool>(n)), power;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) base[i][j] = m(i, j) > 0.0;
    power = base;
    for (std::size_t step = 1; step <= n * n; ++step) {
        bool all = true;
        for (const auto& r : power)
            if (std::find(r.begin(), r.end(), false) != r.end()) all = false;
        if (all) return true;
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (power[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (base[k][j]) next[i][j] = true;
        power = std::move(next);
    }
    return false;
}

std::vector<double> left_multiply(const std::vector<double>& x, const Matrix& p) {
    std::vector<double> y(p.cols(), 0.0);
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) y[j] += x[i] * p(i, j);
    return y;
}

Distribution::Distribution(Alphabet labels, std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (weights_.size() != labels_.size()) throw WeightsNotNormalized("distribution size does not match its labels");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw WeightsNotNormalized("negative or non-finite weight");
        total += w;
    }
    if (std::abs(total - 1.0) > kRowSumTolerance)
        throw WeightsNotNormalized("weights sum to " + std::to_string(total) + ", not 1");
}

StochasticMatrix::StochasticMatrix(Alphabet labels, Matrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
    if (entries_.rows() != labels_.size() || entries_.cols() != labels_.size())
        throw ValidationError("stochastic matrix must be square over its labels");
    for (std::size_t i = 0; i < entries_.rows(); ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < entries_.cols(); ++j) {
            const double v = entries_(i, j);
            if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("negative or non-finite transition probability");
            total += v;
        }
        if (std::abs(total - 1.0) > kRowSumTolerance)
            throw ValidationError("row " + labels_.token(static_cast<Symbol>(i)) + " sums to " +
                                  std::to_string(total) + ", not 1");
    }
}

MarkovMeasure::MarkovMeasure(Distribution pi, StochasticMatrix p) : pi_(std::move(pi)), p_(std::move(p)) {
    if (!(pi_.labels() == p_.labels())) throw ValidationError("pi and P use different alphabets");
    const auto moved = left_multiply(pi_.weights(), p_.entries());
    const double residual = max_abs_diff(moved, pi_.weights());
    if (residual > kStationarityTolerance)
        throw ValidationError("pi is not stationary for P (residual " + std::to_string(residual) + ")");
}

std::vector<Symbol> MarkovMeasure::null_symbols() const {
    std::vector<Symbol> out;
    for (Symbol a = 0; a < pi_.size(); ++a)
        if (pi_[a] == 0.0) out.push_back(a);
    return out;
}

SftSpec::SftSpec(Alphabet alphabet, Matrix m) : alphabet_(std::move(alphabet)), m_(std::move(m)) {
    if (m_.rows() != alphabet_.size() || m_.cols() != alphabet_.size())
        throw ValidationError("SFT matrix must be square over the alphabet");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = 0; j < m_.cols(); ++j)
            if (!(m_(i, j) >= 0.0) || !std::isfinite(m_(i, j))) throw ValidationError("SFT matrix entries must be nonnegative");
    irreducible_ = !unreachable_pair(m_).has_value();
    aperiodic_ = irreducible_ && is_primitive(m_);
}

namespace {

void check_word(const Alphabet& alphabet, const Word& w) {
    for (Symbol a : w)
        if (a >= alphabet.size()) throw UnknownSymbol("#" + std::to_string(a));
}

}  // namespace

double word_measure(const MarkovMeasure& mu, const Word& w) {
    check_word(mu.alphabet(), w);
    if (w.empty()) return 1.0;
    double m = mu.pi(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) m *= mu.p(w[i - 1], w[i]);
    return m;
}

double conditional_word_measure(const MarkovMeasure& mu, Symbol a, const Word& w) {
    check_word(mu.alphabet(), w);
    if (a >= mu.alphabet().size()) throw UnknownSymbol("#" + std::to_string(a));
    double m = 1.0;
    Symbol prev = a;
    for (Symbol b : w) {
        m *= mu.p(prev, b);
        prev = b;
    }
    return m;
}

std::vector<double> stationary_vector(const Matrix& p) {
    require_irreducible(p, nullptr);
    const auto n = static_cast<Eigen::Index>(p.rows());
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = p(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) - (i == j ? 1.0 : 0.0);
    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    const auto lu = a.fullPivLu();
    Eigen::VectorXd x = lu.solve(rhs);
    x += lu.solve(rhs - a * x);  // one refinement step

    std::vector<double> pi(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) pi[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& v : pi) v /= total;
    return pi;
}

Distribution stationary_distribution(const StochasticMatrix& p) {
    require_irreducible(p.entries(), &p.labels());
    return Distribution(p.labels(), stationary_vector(p.entries()));
}

namespace {

struct PowerResult {
    std::vector<double> vector;
    std::size_t iterations;
};

// Iterates x <- B x / ||B x||_inf until successive iterates agree.
PowerResult power_iterate(const Matrix& b, std::size_t max_iterations) {
    const std::size_t n = b.rows();
    std::vector<double> x(n, 1.0);
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        std::vector<double> y = multiply(b, x);
        const double norm = max_norm(y);
        if (norm == 0.0) throw NonConvergence(it);
        for (double& v : y) v /= norm;
        const double step = max_abs_diff(x, y);
        x = std::move(y);
        if (step < kPerronStepTolerance) return {std::move(x), it};
    }
    throw NonConvergence(max_iterations);
}

double rayleigh_estimate(const Matrix& m, const std::vector<double>& x) {
    const auto y = multiply(m, x);
    return std::accumulate(y.begin(), y.end(), 0.0) / std::accumulate(x.begin(), x.end(), 0.0);
}

}  // namespace

PerronPair perron_eigen(const Matrix& m, std::size_t max_iterations) {
    if (m.rows() == 0 || m.rows() != m.cols()) throw ValidationError("Perron solver needs a nonempty square matrix");
    require_irreducible(m, nullptr);

    Matrix b = m;
    if (!is_primitive(m))
        for (std::size_t i = 0; i < b.rows(); ++i) b(i, i) += 1.0;

    auto right = power_iterate(b, max_iterations);
    auto left = power_iterate(transpose(b), max_iterations);

    PerronPair out;
    out.theta = rayleigh_estimate(m, right.vector);
    out.right = std::move(right.vector);
    out.left = std::move(left.vector);
    out.iterations = std::max(right.iterations, left.iterations);

    const auto mr = multiply(m, out.right);
    const auto lm = left_multiply(out.left, m);
    double res_r = 0.0, res_l = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        res_r = std::max(res_r, std::abs(mr[i] - out.theta * out.right[i]));
        res_l = std::max(res_l, std::abs(lm[i] - out.theta * out.left[i]));
    }
    if (res_r > 1e-10 * max_norm(out.right) || res_l > 1e-10 * max_norm(out.left)) throw NonConvergence(out.iterations);

    double dot = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) dot += out.left[i] * out.right[i];
    for (double& v : out.left) v /= dot;
    return out;
}

ParryMeasure parry_measure(const SftSpec& s) {
    require_irreducible(s.matrix(), &s.alphabet());
    const PerronPair eig = perron_eigen(s.matrix());
    const std::size_t n = s.alphabet().size();
    Matrix p(n, n);
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) {
        pi[i] = eig.left[i] * eig.right[i];
        for (std::size_t j = 0; j < n; ++j) p(i, j) = s.matrix()(i, j) * eig.right[j] / (eig.theta * eig.right[i]);
    }
    // Absorb rounding so the constructors' 1e-12 checks see exact stochasticity.
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += p(i, j);
        for (std::size_t j = 0; j < n; ++j) p(i, j) /= total;
    }
    const double mass = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& v : pi) v /= mass;
    return {MarkovMeasure(Distribution(s.alphabet(), std::move(pi)), StochasticMatrix(s.alphabet(), std::move(p))),
            eig.theta};
}

MarkovMeasure make_bernoulli(const Alphabet& alphabet, const std::vector<double>& weights) {
    Distribution pi(alphabet, weights);
    Matrix p(alphabet.size(), alphabet.size());
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        for (std::size_t j = 0; j < alphabet.size(); ++j) p(i, j) = weights[j];
    return MarkovMeasure(std::move(pi), StochasticMatrix(alphabet, std::move(p)));
}

MarkovMeasure make_uniform(const Alphabet& alphabet) {
    return make_bernoulli(alphabet, std::vector<double>(alphabet.size(), 1.0 / static_cast<double>(alphabet.size())));
}

std::vector<Word> support_forbidden_blocks(const MarkovMeasure& mu) {
    std::vector<Word> out;
    const auto k = static_cast<Symbol>(mu.alphabet().size());
    for (Symbol a = 0; a < k; ++a)
        for (Symbol b = 0; b < k; ++b)
            if (mu.p(a, b) == 0.0) out.push_back({a, b});
    return out;
}

bool word_in_support(const MarkovMeasure& mu, const Word& w) {
    check_word(mu.alphabet(), w);
    if (w.empty()) return true;
    if (!(mu.pi(w[0]) > 0.0)) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (!(mu.p(w[i - 1], w[i]) > 0.0)) return false;
    return true;
}

}  // namespace fsel
