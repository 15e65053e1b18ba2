#include "fsel/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <variant>

#include "fsel/error.hpp"

namespace fsel {

void ExperimentConfig::validate() const {
    if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
    if (ks.empty()) throw ValidationError("at least one block length is required");
    const std::size_t kmax = *std::max_element(ks.begin(), ks.end());
    if (std::find(ks.begin(), ks.end(), std::size_t{0}) != ks.end()) throw ValidationError("block lengths must be positive");
    if (n < kmax * 100) throw ValidationError("n must be at least 100 * max(k)");
}

namespace {

std::vector<BlockCounter> make_counters(const std::vector<std::size_t>& ks, std::size_t base, CountMode mode) {
    std::vector<BlockCounter> out;
    for (std::size_t k : ks) out.emplace_back(base, k, mode);
    return out;
}

std::vector<StreamFrequencies> summarize(const std::vector<BlockCounter>& counters, const std::vector<std::size_t>& ks,
                                         const MarkovMeasure& mu) {
    std::vector<StreamFrequencies> out;
    for (std::size_t i = 0; i < counters.size(); ++i) {
        StreamFrequencies f;
        f.k = ks[i];
        if (counters[i].consumed() >= ks[i]) {
            f.report = counters[i].report();
            f.discrepancy = discrepancy(*f.report, mu);
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const Selector& s, const Declarations& declarations,
                                const MarkovMeasure& mu, bool markov_mode) {
    config.validate();
    if (!(s.alphabet() == mu.alphabet())) throw ValidationError("selector and measure use different alphabets");

    ExperimentReport report;
    report.markov_mode = markov_mode;
    const auto oblivious = is_oblivious(s);
    if (!oblivious.oblivious) {
        report.status = ExperimentStatus::CompatibilityFailure;
        report.message = "selector is not oblivious (state " + s.state_name(*oblivious.witness) + ")";
        return report;
    }
    if (markov_mode) {
        auto compat = check_selector_compatibility(s, mu, declarations);
        report.violations = std::move(compat.violations);
        report.witness = std::move(compat.witness);
        if (!report.witness) {
            report.status = ExperimentStatus::CompatibilityFailure;
            report.message = "selector is not compatible with the measure";
            return report;
        }
    }

    const auto scc = scc_decomposition(s);
    const std::size_t base = s.alphabet().size();
    auto input = make_counters(config.ks, base, config.mode);
    auto output = make_counters(config.ks, base, config.mode);

    std::unique_ptr<ChampernowneGenerator> champ;
    std::unique_ptr<MarkovSampler> sampler;
    if (config.generator == GeneratorKind::Champernowne)
        champ = std::make_unique<ChampernowneGenerator>(base);
    else
        sampler = std::make_unique<MarkovSampler>(mu, config.seed);

    SelectorCursor cursor(s);
    if (scc.recurrent[scc.component_of[cursor.state()]]) report.recurrent_entry = 0;
    std::optional<Symbol> last_output;
    try {
        for (std::size_t i = 0; i < config.n; ++i) {
            const Symbol a = champ ? champ->next() : sampler->next();
            if (!report.recurrent_entry && scc.recurrent[scc.component_of[cursor.state()]]) {
                report.recurrent_entry = i;
                if (config.after_recurrent) {
                    input = make_counters(config.ks, base, config.mode);
                    output = make_counters(config.ks, base, config.mode);
                }
            }
            for (auto& c : input) c.push(a);
            if (const auto kept = cursor.feed(a)) {
                ++report.output_length;
                for (auto& c : output) c.push(*kept);
                if (markov_mode && (last_output ? !(mu.p(*last_output, *kept) > 0.0) : !(mu.pi(*kept) > 0.0)))
                    ++report.forbidden_output_blocks;
                last_output = kept;
            }
        }
    } catch (const UndefinedTransition& e) {
        report.status = ExperimentStatus::CompatibilityFailure;
        report.message = e.what();
    }
    report.input_length = cursor.consumed();
    for (const auto& c : input) report.counter_cells += c.table_size();
    for (const auto& c : output) report.counter_cells += c.table_size();
    report.input = summarize(input, config.ks, mu);
    report.output = summarize(output, config.ks, mu);
    if (report.status != ExperimentStatus::Pass) return report;

    for (const auto& f : report.output)
        if (!f.report || !(f.discrepancy <= config.tolerance)) {
            report.status = ExperimentStatus::ToleranceFailure;
            report.message = f.report ? "output discrepancy D_" + std::to_string(f.k) + " = " +
                                            format_general(f.discrepancy) + " exceeds tolerance"
                                      : "output shorter than block length " + std::to_string(f.k);
            break;
        }
    if (report.forbidden_output_blocks > 0 && report.status == ExperimentStatus::Pass) {
        report.status = ExperimentStatus::ToleranceFailure;
        report.message = "output leaves the support of the measure";
    }
    return report;
}

std::string format_general(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

void write_frequency_table(std::ostream& out, const FrequencyReport& report, const Alphabet& alphabet,
                           const MarkovMeasure* mu) {
    out << (mu ? "block,count,frequency,target,abs_error\n" : "block,count,frequency\n");
    for (std::size_t r = 0; r < report.counts.size(); ++r) {
        const Word block = report.block(r);
        std::string name;
        for (std::size_t i = 0; i < block.size(); ++i) name += (i ? " " : "") + alphabet.token(block[i]);
        if (alphabet.single_char()) name = alphabet.format_word(block);
        const double freq = report.frequency(r);
        out << name << ',' << report.counts[r] << ',' << format_general(freq);
        if (mu) {
            const double target = word_measure(*mu, block);
            out << ',' << format_general(target) << ',' << format_general(std::abs(freq - target));
        }
        out << '\n';
    }
}

void write_experiment_csv(std::ostream& out, const ExperimentConfig& config, const CsvProvenance& provenance,
                          const ExperimentReport& report, const Alphabet& alphabet, const MarkovMeasure& mu) {
    out << "# selector=" << provenance.selector << '\n'
        << "# selector_hash=" << provenance.selector_hash << '\n'
        << "# measure=" << provenance.measure << '\n'
        << "# generator=" << (config.generator == GeneratorKind::Champernowne ? "champernowne" : "sample") << '\n'
        << "# seed=" << config.seed << '\n'
        << "# n=" << config.n << '\n'
        << "# mode=" << (config.mode == CountMode::Sliding ? "sliding" : "aligned") << '\n'
        << "# tolerance=" << format_general(config.tolerance) << '\n'
        << "# after_recurrent=" << (config.after_recurrent ? 1 : 0) << '\n';
    if (report.witness) {
        out << "# witness=";
        for (StateId q = 0; q < report.witness->iota.size(); ++q) {
            out << (q ? ";" : "") << "iota(" << q << ")=" << alphabet.token(report.witness->iota[q]);
            if (!report.witness->eta.empty()) out << ",eta(" << q << ")=" << alphabet.token(report.witness->eta[q]);
        }
        out << '\n';
    }
    for (const auto& v : report.violations)
        out << "# violation=" << to_string(v.kind) << ' ' << v.location << ' ' << v.detail << '\n';
    out << "# recurrent_entry=" << (report.recurrent_entry ? std::to_string(*report.recurrent_entry) : "none") << '\n'
        << "# input_length=" << report.input_length << '\n'
        << "# output_length=" << report.output_length << '\n';

    const auto section = [&](const char* name, const std::vector<StreamFrequencies>& streams) {
        for (const auto& f : streams) {
            out << "# stream=" << name << " k=" << f.k;
            if (f.report) out << " discrepancy=" << format_general(f.discrepancy);
            out << '\n';
            if (f.report) write_frequency_table(out, *f.report, alphabet, &mu);
        }
    };
    section("input", report.input);
    section("output", report.output);
    if (report.markov_mode) out << "# forbidden_output_blocks=" << report.forbidden_output_blocks << '\n';
    if (!report.message.empty()) out << "# message=" << report.message << '\n';
    out << "# result=" << (report.pass() ? "PASS" : "FAIL") << '\n';
}

}  // namespace fsel
