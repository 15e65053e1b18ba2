#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsel/chain.hpp"
#include "fsel/compatibility.hpp"
#include "fsel/error.hpp"
#include "support.hpp"

using namespace fsel;
using namespace fsel::testing;

namespace {

struct Fig3 {
    ParsedSelector parsed = parse_selector_file(fixture("fig3.sel"));
    MarkovMeasure mu = golden_parry();
    CompatibilityWitness witness = *check_selector_compatibility(parsed.selector, mu, parsed.declarations).witness;
    const Automaton& automaton() const { return parsed.selector.automaton(); }
    StateId state(const char* name) const { return parsed.selector.state_index(name); }
};

double row_sum(const Matrix& m, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
    return s;
}

}  // namespace

TEST_CASE("uniform chains of the figure automata") {
    const StateChain fig2 = uniform_chain(load_automaton("fig2.sel"));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(fig2.transition(i, j) == 0.5);
    CHECK(fig2.require_stationary()[0] == doctest::Approx(0.5).epsilon(1e-12));

    const StateChain fig1 = uniform_chain(load_automaton("fig1.sel"));
    const Matrix expected = Matrix::from_rows({{0.5, 0.5, 0}, {0.5, 0, 0.5}, {0.5, 0, 0.5}});
    CHECK(fig1.transition == expected);
    const auto& pi = fig1.require_stationary();
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pi[2] == doctest::Approx(0.25).epsilon(1e-12));

    const Automaton loop(binary(), {"q"}, 0, {StateId{0}, StateId{0}});
    CHECK(uniform_chain(loop).require_stationary() == std::vector<double>{1.0});
    CHECK_THROWS_AS(uniform_chain(load_automaton("fig3.sel")), Incomplete);
}

TEST_CASE("compatible chain of Figure 3") {
    const Fig3 f;
    const StateChain chain = compatible_chain(f.automaton(), f.mu, f.witness.iota);
    const StateId s000 = f.state("000");
    CHECK(chain.transition(s000, f.state("100")) == f.mu.p(0, 0));
    CHECK(chain.transition(s000, f.state("110")) == f.mu.p(0, 1));
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(row_sum(chain.transition, i) - 1.0) <= 1e-12);
    const auto& pi = chain.require_stationary();
    CHECK(pi[f.state("010")] == 0.0);
    double total = 0.0;
    for (double x : pi) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const auto moved = left_multiply(pi, chain.transition);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(moved[i] - pi[i]) <= 1e-10);
}

TEST_CASE("the chain of the support graph is the measure itself") {
    const MarkovMeasure mu = golden_parry();
    const Automaton support = Automaton::from_edges(binary(), {"0", "1"}, 0, {{0, 0, 0}, {0, 1, 1}, {1, 0, 0}});
    const StateChain chain = compatible_chain(support, mu, {0, 1});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(chain.require_stationary()[i] == doctest::Approx(mu.pi(i)).epsilon(1e-12));
        for (std::size_t j = 0; j < 2; ++j) CHECK(chain.transition(i, j) == mu.p(i, j));
    }
    // With the uniform measure a complete machine gives its uniform chain.
    const Automaton fig1 = load_automaton("fig1.sel");
    CHECK(compatible_chain(fig1, make_uniform(binary()), {0, 0, 1}).transition == uniform_chain(fig1).transition);
    const Automaton fig2 = load_automaton("fig2.sel");
    CHECK(compatible_chain(fig2, make_uniform(binary()), {0, 1}).transition == uniform_chain(fig2).transition);
}

TEST_CASE("rows are stochastic exactly when the machine is shift complete") {
    const Fig3 f;
    CHECK(is_shift_complete(f.automaton(), f.mu, f.witness.iota).complete);
    std::vector<Edge> edges;
    for (const Edge& e : f.automaton().edges())
        if (!(e.source == f.state("100") && e.symbol == 1)) edges.push_back(e);
    const Automaton pruned = Automaton::from_edges(binary(), f.automaton().state_names(), 0, edges);
    CHECK_FALSE(is_shift_complete(pruned, f.mu, f.witness.iota).complete);
    CHECK_THROWS_AS(compatible_chain(pruned, f.mu, f.witness.iota), NotShiftComplete);
}

TEST_CASE("snake distributions agree with the eigensolve") {
    const Automaton fig2 = load_automaton("fig2.sel");
    for (std::size_t n = 1; n <= 3; ++n) {
        const SnakeDistribution d = snake_distribution(fig2, n);
        CHECK(d.max_deviation <= kSnakeAgreementTolerance);
        for (double x : d.closed_form) CHECK(x == doctest::Approx(0.5 / (1 << n)).epsilon(1e-12));
    }
    const Automaton loop(binary(), {"q"}, 0, {StateId{0}, StateId{0}});
    for (double x : snake_distribution(loop, 2).closed_form) CHECK(x == doctest::Approx(0.25));

    const Fig3 f;
    const StateChain base = compatible_chain(f.automaton(), f.mu, f.witness.iota);
    for (std::size_t n = 1; n <= 3; ++n) {
        const SnakeDistribution d = snake_distribution(f.automaton(), f.mu, f.witness, n);
        CHECK(d.max_deviation <= kSnakeAgreementTolerance);
        // projecting onto the first component recovers the base distribution
        std::vector<double> projected(8, 0.0);
        for (StateId s = 0; s < d.snake.automaton.num_states(); ++s) projected[d.snake.base_state[s]] += d.closed_form[s];
        for (std::size_t q = 0; q < 8; ++q) CHECK(std::abs(projected[q] - base.require_stationary()[q]) <= 1e-12);
    }
    const SnakeDistribution d1 = snake_distribution(f.automaton(), f.mu, f.witness, 1);
    for (StateId s = 0; s < d1.snake.automaton.num_states(); ++s) {
        const StateId p = d1.snake.base_state[s];
        const double expected = base.require_stationary()[p] * f.mu.p(f.witness.iota[p], d1.snake.window[s][0]);
        CHECK(std::abs(d1.closed_form[s] - expected) <= 1e-12);
    }
}

TEST_CASE("snake agreement over random complete machines") {
    Rng rng(41);
    int tested = 0;
    while (tested < 40) {
        const Automaton a = random_complete_automaton(rng, 8, 2);
        if (!scc_decomposition(a).strongly_connected()) continue;
        for (std::size_t n = 1; n <= 3; ++n) CHECK(snake_distribution(a, n).max_deviation <= kSnakeAgreementTolerance);
        ++tested;
    }
}

TEST_CASE("lifted run measure") {
    const Fig3 f;
    const StateChain chain = compatible_chain(f.automaton(), f.mu, f.witness.iota);
    const auto& pi = chain.require_stationary();
    const StateId p = f.state("110");
    CHECK(lifted_run_measure(f.automaton(), chain, f.mu, f.witness.iota, p, Word{}) == pi[p]);
    CHECK(lifted_run_measure(f.automaton(), chain, f.mu, f.witness.iota, p, bits("0")) == doctest::Approx(pi[p]));
    CHECK_THROWS_AS(lifted_run_measure(f.automaton(), chain, f.mu, f.witness.iota, p, bits("1")), UnrealizableRun);

    for (StateId q = 0; q < 8; ++q)
        for (std::size_t k = 0; k <= 6; ++k) {
            double total = 0.0;
            for (const Word& u : all_words(2, k))
                if (run_end(f.automaton(), q, u))
                    total += lifted_run_measure(f.automaton(), chain, f.mu, f.witness.iota, q, u);
            CHECK(std::abs(total - pi[q]) <= 1e-12);
        }
}

TEST_CASE("empirical state frequencies") {
    const Automaton loop(binary(), {"q"}, 0, {StateId{0}, StateId{0}});
    const auto single = empirical_state_frequencies(loop, bits("0110101"), 7, {1.0});
    CHECK(single.counts == std::vector<std::size_t>{7});
    CHECK(single.ratios[0] == 1.0);
    CHECK(single.max_deviation == 0.0);

    const Automaton fig2 = load_automaton("fig2.sel");
    const MarkovMeasure uniform = make_uniform(binary());
    MarkovSampler sampler(uniform, 1);
    const auto report = empirical_state_frequencies(fig2, [&] { return sampler.next(); }, 1'000'000, {0.5, 0.5});
    CHECK(report.counts[0] + report.counts[1] == 1'000'000);
    CHECK(report.max_deviation < 0.01);

    CHECK_THROWS_AS(empirical_state_frequencies(load_automaton("fig3.sel"), bits("011"), 3,
                                                std::vector<double>(8, 0.125)),
                    UndefinedTransition);
}
