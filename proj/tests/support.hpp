#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsel/automaton.hpp"
#include "fsel/io.hpp"
#include "fsel/measures.hpp"
#include "fsel/seqgen.hpp"

namespace fsel::testing {

inline std::string fixture(const std::string& name) { return std::string(FSEL_FIXTURE_DIR) + "/" + name; }

inline Selector load_selector(const std::string& name) { return parse_selector_file(fixture(name)).selector; }
inline Automaton load_automaton(const std::string& name) { return parse_automaton_file(fixture(name)).automaton; }

inline const Alphabet& binary() {
    static const Alphabet a({"0", "1"});
    return a;
}

inline Word bits(const std::string& text) { return binary().parse_word(text); }
inline std::string str(const Word& w) { return binary().format_word(w); }

inline MarkovMeasure golden_parry() { return parry_measure(parse_matrix_file(fixture("golden.mat"))).measure; }

inline std::vector<std::string> state_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    return names;
}

// Deterministic pseudo-random helpers built on the library PRNG.
struct Rng {
    SplitMix64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen.next() % n); }
    bool coin() { return (gen.next() >> 63) != 0; }
    double unit() { return gen.uniform(); }
};

// A complete automaton with up to max_states states over an alphabet of size k.
inline Automaton random_complete_automaton(Rng& rng, std::size_t max_states, std::size_t k) {
    const std::size_t n = 1 + rng.below(max_states);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < k; ++i) tokens.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<std::optional<StateId>> delta(n * k);
    for (auto& t : delta) t = static_cast<StateId>(rng.below(n));
    return Automaton(Alphabet(tokens), state_names(n), 0, std::move(delta));
}

inline Selector random_selector(Rng& rng, std::size_t max_states, std::size_t k, bool oblivious) {
    const Automaton a = random_complete_automaton(rng, max_states, k);
    std::vector<Action> actions(a.num_states() * k);
    std::vector<Action> per_state(a.num_states());
    for (auto& act : per_state) act = rng.coin() ? Action::Keep : Action::Drop;
    for (std::size_t i = 0; i < actions.size(); ++i)
        actions[i] = oblivious ? per_state[i / k] : (rng.coin() ? Action::Keep : Action::Drop);
    return Selector(a, std::move(actions));
}

inline Word random_word(Rng& rng, std::size_t k, std::size_t len) {
    Word w(len);
    for (auto& s : w) s = static_cast<Symbol>(rng.below(k));
    return w;
}

// A random Markov measure with an irreducible, possibly sparse, transition pattern.
inline MarkovMeasure random_markov(Rng& rng, std::size_t k) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < k; ++i) tokens.push_back(std::to_string(i));
    const Alphabet alphabet(tokens);
    Matrix p(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        // A cycle i -> i+1 keeps the pattern irreducible; other entries may vanish.
        for (std::size_t j = 0; j < k; ++j)
            if (rng.coin()) p(i, j) = rng.unit();
        p(i, (i + 1) % k) = 0.1 + rng.unit();
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += p(i, j);
        for (std::size_t j = 0; j < k; ++j) p(i, j) /= sum;
    }
    const StochasticMatrix sm(alphabet, p);
    return MarkovMeasure(stationary_distribution(sm), sm);
}

}  // namespace fsel::testing
