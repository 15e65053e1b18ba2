#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsel/error.hpp"
#include "support.hpp"

using namespace fsel;
using namespace fsel::testing;

TEST_CASE("splitmix64 reference outputs") {
    // Published first outputs of splitmix64 seeded with 0.
    SplitMix64 g(0);
    CHECK(g.next() == 0xE220A8397B1DCDAFull);
    CHECK(g.next() == 0x6E789E6AA1B965F4ull);
    CHECK(g.next() == 0x06C45D188009454Full);
}

TEST_CASE("inverse CDF sampling follows alphabet order") {
    const std::vector<double> w{0.25, 0.0, 0.75};
    CHECK(sample_index(w, 0.0) == 0u);
    CHECK(sample_index(w, 0.2499) == 0u);
    CHECK(sample_index(w, 0.25) == 2u);
    CHECK(sample_index(w, 0.9999999) == 2u);
}

TEST_CASE("Champernowne prefixes") {
    CHECK(str(champernowne(binary(), 10)) == "0100011011");
    CHECK(str(champernowne(binary(), 1)) == "0");
    CHECK(champernowne(binary(), 0).empty());
    const Alphabet ternary({"0", "1", "2"});
    CHECK(ternary.format_word(champernowne(ternary, 6)) == "012000");
    CHECK(str(champernowne(binary(), 34)) == "0100011011000001010011100101110111");
}

TEST_CASE("Champernowne balance at a million symbols") {
    const Word x = champernowne(binary(), 1'000'000);
    const auto report = block_frequencies(2, x, 1, CountMode::Sliding);
    CHECK(discrepancy(report, make_uniform(binary())) < 0.02);
}

TEST_CASE("Markov sampling") {
    CHECK(str(sample_markov(make_uniform(binary()), 1, 8)) == "11100111");
    const MarkovMeasure dirac(Distribution(binary(), {1.0, 0.0}),
                              StochasticMatrix(binary(), Matrix::from_rows({{1.0, 0.0}, {1.0, 0.0}})));
    CHECK(str(sample_markov(dirac, 42, 12)) == "000000000000");
    const MarkovMeasure mu = golden_parry();
    for (std::uint64_t seed : {1ull, 2ull, 77ull, 123456789ull}) {
        const Word x = sample_markov(mu, seed, 1'000'000);
        const auto pairs = block_frequencies(2, x, 2, CountMode::Sliding);
        CHECK(pairs.counts[3] == 0);
        if (seed == 1) CHECK(discrepancy(pairs, mu) < 0.01);
    }
    CHECK(sample_markov(mu, 5, 1000) == sample_markov(mu, 5, 1000));
}

TEST_CASE("samples never contain forbidden blocks of random sparse measures") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 2 + rng.below(3);
        const MarkovMeasure mu = random_markov(rng, k);
        const Word x = sample_markov(mu, rng.gen.next(), 50'000);
        for (std::size_t i = 0; i + 1 < x.size(); ++i) REQUIRE(mu.p(x[i], x[i + 1]) > 0.0);
    }
}

TEST_CASE("block frequency examples") {
    const auto sliding = block_frequencies(2, bits("0101"), 2, CountMode::Sliding);
    CHECK(sliding.counts[rank_word(bits("01"), 2)] == 2);
    CHECK(sliding.counts[rank_word(bits("10"), 2)] == 1);
    CHECK(sliding.frequency(rank_word(bits("01"), 2)) == doctest::Approx(2.0 / 3));
    CHECK(sliding.frequency(rank_word(bits("10"), 2)) == doctest::Approx(1.0 / 3));

    const auto aligned = block_frequencies(2, bits("0101"), 2, CountMode::Aligned);
    CHECK(aligned.counts[rank_word(bits("01"), 2)] == 2);
    CHECK(aligned.frequency(rank_word(bits("01"), 2)) == 1.0);

    const auto symbols = block_frequencies(2, bits("0100011011"), 1, CountMode::Sliding);
    CHECK(symbols.counts == std::vector<std::size_t>{5, 5});
    CHECK_THROWS_AS(block_frequencies(2, bits("01"), 0, CountMode::Sliding), BlockLengthOutOfRange);
    CHECK_THROWS_AS(block_frequencies(2, bits("01"), 3, CountMode::Sliding), BlockLengthOutOfRange);
}

TEST_CASE("discrepancy examples") {
    const MarkovMeasure uniform = make_uniform(binary());
    CHECK(discrepancy(block_frequencies(2, bits("0101010101"), 1, CountMode::Sliding), uniform) == 0.0);
    CHECK(discrepancy(block_frequencies(2, bits("0000000000"), 1, CountMode::Sliding), uniform) == 0.5);
}

TEST_CASE("count identities and mode agreement for k = 1") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t base = 2 + rng.below(3);
        const Word x = random_word(rng, base, 1 + rng.below(200));
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(x.size(), 4));
        const auto sliding = block_frequencies(base, x, k, CountMode::Sliding);
        const auto aligned = block_frequencies(base, x, k, CountMode::Aligned);
        CHECK(sliding.total() == x.size() - k + 1);
        CHECK(aligned.total() == x.size() / k);
        CHECK(sliding.counts.size() == checked_pow(base, k));
        if (k == 1) CHECK(sliding.counts == aligned.counts);

        BlockCounter streaming(base, k, CountMode::Sliding);
        for (Symbol a : x) streaming.push(a);
        CHECK(streaming.report().counts == sliding.counts);
    }
}

TEST_CASE("aligned and sliding frequencies agree on a Markov sample") {
    const MarkovMeasure mu = golden_parry();
    const Word x = sample_markov(mu, 3, 1'000'000);
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto sliding = block_frequencies(2, x, k, CountMode::Sliding);
        const auto aligned = block_frequencies(2, x, k, CountMode::Aligned);
        for (std::size_t r = 0; r < sliding.counts.size(); ++r)
            CHECK(std::abs(sliding.frequency(r) - aligned.frequency(r)) < 0.01);
    }
}

TEST_CASE("block counter memory does not depend on the stream length") {
    BlockCounter counter(2, 3, CountMode::Sliding);
    const std::size_t cells = counter.table_size();
    MarkovSampler sampler(make_uniform(binary()), 9);
    for (int i = 0; i < 200'000; ++i) counter.push(sampler.next());
    CHECK(counter.table_size() == cells);
    CHECK(cells == 8);
    CHECK(counter.consumed() == 200'000);
}
