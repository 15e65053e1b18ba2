// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fsel/chain.hpp"
#include "fsel/compatibility.hpp"
#include "fsel/experiment.hpp"
#include "fsel/oracles.hpp"
#include "support.hpp"

using namespace fsel;
using namespace fsel::testing;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double time_limit;  // seconds, 0 for none
    std::function<Verdict()> body;
};

std::string fmt(double v) { return format_general(v); }

double max_output_discrepancy(const ExperimentReport& r) {
    double d = 0.0;
    for (const auto& f : r.output) d = std::max(d, f.report ? f.discrepancy : 1.0);
    return d;
}

Verdict parry_fixture() {
    const ParryMeasure parry = parry_measure(parse_matrix_file(fixture("golden.mat")));
    const auto& mu = parry.measure;
    double err = std::abs(parry.theta - 1.6180339887499);
    err = std::max({err, std::abs(mu.pi(0) - 0.7236067977), std::abs(mu.pi(1) - 0.2763932023)});
    err = std::max({err, std::abs(mu.p(0, 0) - 0.6180339887), std::abs(mu.p(0, 1) - 0.3819660113),
                    std::abs(mu.p(1, 0) - 1.0), std::abs(mu.p(1, 1))});
    return {err <= 1e-9, "theta=" + fmt(parry.theta) + " max_error=" + fmt(err)};
}

Verdict uniform_selection(GeneratorKind kind, std::vector<std::size_t> ks, double tolerance) {
    ExperimentConfig config;
    config.generator = kind;
    config.seed = 1;
    config.n = 1'000'000;
    config.ks = std::move(ks);
    config.tolerance = tolerance;
    const auto report = run_experiment(config, load_selector("fig2.sel"), {}, make_uniform(binary()), false);
    std::string detail = "output_length=" + std::to_string(report.output_length);
    for (const auto& f : report.output) detail += " D_" + std::to_string(f.k) + "=" + fmt(f.discrepancy);
    return {report.pass() && max_output_discrepancy(report) < tolerance, detail};
}

Verdict markov_selection() {
    const ParsedSelector fig3 = parse_selector_file(fixture("fig3.sel"));
    const MarkovMeasure mu = golden_parry();
    ExperimentConfig config;
    config.seed = 1;
    config.n = 1'000'000;
    const auto report = run_experiment(config, fig3.selector, fig3.declarations, mu, true);
    std::size_t ones = 0;
    for (const auto& f : report.output)
        if (f.k == 2 && f.report) ones = f.report->counts[3];
    std::string detail = "output_length=" + std::to_string(report.output_length) + " occ(11)=" + std::to_string(ones);
    for (const auto& f : report.output) detail += " D_" + std::to_string(f.k) + "=" + fmt(f.discrepancy);
    return {report.pass() && ones == 0 && report.forbidden_output_blocks == 0 && max_output_discrepancy(report) < 0.01,
            detail};
}

Verdict run_count_bound() {
    const Selector fig2 = load_selector("fig2.sel");
    std::size_t checks = 0, failures = 0;
    for (StateId p = 0; p < fig2.num_states(); ++p)
        for (std::size_t n = 0; n <= 12; ++n) {
            const auto e = enumerate_runs(fig2, p, n);
            for (std::size_t len = 0; len <= std::min<std::size_t>(n, 6); ++len)
                for (const Word& w : all_words(2, len)) {
                    ++checks;
                    if (count_output_prefix(e, w) > checked_pow(2, n - len)) ++failures;
                }
        }
    return {failures == 0, std::to_string(checks) + " checks, " + std::to_string(failures) + " failures"};
}

Verdict markov_bound() {
    const ParsedSelector fig3 = parse_selector_file(fixture("fig3.sel"));
    const MarkovMeasure mu = golden_parry();
    const auto witness = *check_selector_compatibility(fig3.selector, mu, fig3.declarations).witness;
    std::size_t checks = 0, failures = 0;
    double slack = 1.0;
    for (StateId p = 0; p < fig3.selector.num_states(); ++p)
        for (std::size_t n = 0; n <= 12; ++n) {
            const auto e = enumerate_runs(fig3.selector, p, n);
            for (std::size_t len = 0; len <= std::min<std::size_t>(n, 6); ++len)
                for (const Word& w : all_words(2, len)) {
                    if (!word_in_support(mu, w)) continue;
                    ++checks;
                    const double value = measure_output_prefix(e, mu, witness.iota[p], w);
                    const double bound = conditional_word_measure(mu, witness.eta[p], w);
                    slack = std::min(slack, bound - value);
                    if (!(value <= bound + 1e-12)) ++failures;
                }
        }
    return {failures == 0, std::to_string(checks) + " checks, " + std::to_string(failures) +
                               " failures, min slack " + fmt(slack)};
}

Verdict equirun() {
    const Selector fig2 = load_selector("fig2.sel");
    const auto r = equirun_scan(fig2, 2, 0.1, 20);
    if (!r.witness_n) return {false, "no witness up to n=20"};
    bool inside = true;
    std::size_t at_witness = 0;
    for (const auto& c : r.checks)
        if (c.n == *r.witness_n) {
            ++at_witness;
            const double lo = 0.9 * std::ldexp(1.0, static_cast<int>(c.n) - 2), hi = std::ldexp(1.0, static_cast<int>(c.n) - 2);
            inside = inside && c.value >= lo && c.value <= hi;
        }
    return {inside && at_witness == 2 * 4, "witness n=" + std::to_string(*r.witness_n)};
}

Verdict oracle_equivalence() {
    Rng rng(20240601);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const Automaton d = random_complete_automaton(rng, 4, 2 + rng.below(2));
        std::vector<bool> accepting(d.num_states());
        for (std::size_t q = 0; q < accepting.size(); ++q) accepting[q] = rng.coin();
        const Word x = random_word(rng, d.alphabet().size(), rng.below(17));
        if (apply_selector(dfa_to_selector(d, accepting), x) != brute_force_prefix_selection(x, d, accepting))
            ++mismatches;
    }
    return {mismatches == 0, "1000 cases, " + std::to_string(mismatches) + " mismatches"};
}

Verdict snake() {
    double worst = 0.0;
    const Automaton fig2 = load_automaton("fig2.sel");
    for (std::size_t n = 1; n <= 3; ++n) worst = std::max(worst, snake_distribution(fig2, n).max_deviation);
    const ParsedSelector fig3 = parse_selector_file(fixture("fig3.sel"));
    const MarkovMeasure mu = golden_parry();
    const auto witness = *check_selector_compatibility(fig3.selector, mu, fig3.declarations).witness;
    worst = std::max(worst, snake_distribution(fig3.selector.automaton(), mu, witness, 1).max_deviation);
    return {worst <= 1e-9, "max deviation " + fmt(worst)};
}

std::pair<int, std::string> cli(const std::string& args) {
    FILE* pipe = popen((std::string(FSEL_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Verdict compatibility_verdicts() {
    const ParsedSelector fig3 = parse_selector_file(fixture("fig3.sel"));
    const MarkovMeasure mu = golden_parry();
    const auto r = check_selector_compatibility(fig3.selector, mu, fig3.declarations);
    bool labels = r.compatible();
    if (labels)
        for (StateId q = 0; q < fig3.selector.num_states(); ++q) {
            const std::string& prs = fig3.selector.state_name(q);
            labels = labels && binary().token(r.witness->iota[q]) == prs.substr(1, 1) &&
                     binary().token(r.witness->eta[q]) == prs.substr(2, 1);
        }
    const auto [code, out] = cli("compat --selector " + fixture("fig2.sel") + " --measure " + fixture("golden.msr"));
    const bool cites = out.find("ForbiddenStep q1-1->q1 P(1,1)=0") != std::string::npos;
    return {labels && code == 2 && cites, std::string("fig3 witness ") + (labels ? "iota(prs)=r eta(prs)=s" : "wrong") +
                                              ", fig2 exit " + std::to_string(code) +
                                              (cites ? " citing P(1,1)=0" : " without citing P(1,1)=0")};
}

Verdict state_frequencies() {
    const Automaton fig1 = load_automaton("fig1.sel");
    MarkovSampler sampler(make_uniform(binary()), 1);
    const auto report = empirical_state_frequencies(fig1, [&] { return sampler.next(); }, 1'000'000, {0.5, 0.25, 0.25});
    return {report.max_deviation < 0.01, "max deviation " + fmt(report.max_deviation)};
}

Verdict measure_axioms() {
    Rng rng(500);
    std::size_t identities = 0, failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 2 + rng.below(3);
        const MarkovMeasure mu = random_markov(rng, k);
        const Word w = random_word(rng, k, rng.below(9));
        double right = 0.0, left = 0.0, decomposed = 0.0;
        for (Symbol a = 0; a < k; ++a) {
            Word wa = w, aw{a};
            wa.push_back(a);
            aw.insert(aw.end(), w.begin(), w.end());
            right += word_measure(mu, wa);
            left += word_measure(mu, aw);
            decomposed += mu.pi(a) * conditional_word_measure(mu, a, w);
        }
        const double base = word_measure(mu, w);
        for (double v : {right, left, decomposed}) {
            ++identities;
            worst = std::max(worst, std::abs(v - base));
            if (std::abs(v - base) > 1e-12) ++failures;
        }
    }
    return {failures == 0, std::to_string(identities) + " identities over 500 cases, worst " + fmt(worst)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Parry measure of the golden mean shift", 0.1, parry_fixture},
        {2, "uniform i.i.d. input through Figure 2", 2.0,
         [] { return uniform_selection(GeneratorKind::MarkovSample, {1, 2, 3}, 0.01); }},
        {3, "Champernowne input through Figure 2", 2.0,
         [] { return uniform_selection(GeneratorKind::Champernowne, {1, 2}, 0.03); }},
        {4, "golden mean Parry sample through Figure 3", 3.0, markov_selection},
        {5, "run-count upper bound, exhaustive", 10.0, run_count_bound},
        {6, "Markov upper bound, exhaustive", 30.0, markov_bound},
        {7, "equirun witness for Figure 2", 0.0, equirun},
        {8, "selector application equals prefix selection", 0.0, oracle_equivalence},
        {9, "snake distribution closed form", 0.0, snake},
        {10, "compatibility verdicts", 0.0, compatibility_verdicts},
        {11, "state frequencies of Figure 1", 0.0, state_frequencies},
        {12, "measure identities", 0.0, measure_axioms},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            v = c.body();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream timing;
        timing << " [" << format_general(seconds) << " s";
        if (c.time_limit > 0.0) {
            timing << " / limit " << c.time_limit << " s";
            if (seconds >= c.time_limit) {
                v.pass = false;
                v.detail += " (too slow)";
            }
        }
        timing << "]";
        if (!v.pass) ++failed;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- " << v.detail
                  << timing.str() << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
