// Command-line front end. Exit codes: 0 success, 1 usage or parse error,
// 2 domain validation failure (compatibility, irreducibility, ...),
// 3 check failure (lemma or tolerance).

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fsel/automaton.hpp"
#include "fsel/chain.hpp"
#include "fsel/compatibility.hpp"
#include "fsel/error.hpp"
#include "fsel/experiment.hpp"
#include "fsel/io.hpp"
#include "fsel/measures.hpp"
#include "fsel/oracles.hpp"
#include "fsel/seqgen.hpp"

namespace {

using namespace fsel;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitCheck = 3;

std::string read_all(const std::string& path) {
    if (path.empty() || path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

Alphabet alphabet_from(const std::string& spec) {
    std::istringstream ss(spec);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    return Alphabet(std::move(tokens));
}

// Measure options shared by several subcommands.
struct MeasureChoice {
    std::string path;
    bool uniform = false;

    bool markov() const { return !path.empty(); }
    MarkovMeasure load(const Alphabet& alphabet) const {
        if (!path.empty()) {
            auto mu = parse_measure_file(path);
            if (!(mu.alphabet() == alphabet)) throw ValidationError("measure alphabet differs from the machine's");
            return mu;
        }
        return make_uniform(alphabet);
    }
    std::string describe() const { return path.empty() ? "uniform" : path; }
};

void add_measure_options(CLI::App* cmd, MeasureChoice& m) {
    auto* measure = cmd->add_option("--measure", m.path, "Markov measure file");
    auto* uniform = cmd->add_flag("--uniform", m.uniform, "use the uniform measure (default)");
    measure->excludes(uniform);
}

std::string word_text(const Alphabet& alphabet, const Word& w) {
    return w.empty() ? std::string(kEpsilonToken) : alphabet.format_word(w);
}

int cmd_parry(const std::string& path, int precision) {
    const SftSpec spec = parse_matrix_file(path);
    const ParryMeasure parry = parry_measure(spec);
    std::cout << "theta " << format_fixed(parry.theta, precision) << '\n';
    write_measure(std::cout, spec.alphabet(), &parry.measure.pi().weights(), parry.measure.transition().entries(),
                  precision);
    return kExitOk;
}

int cmd_stationary(const std::string& path, int precision) {
    // Accepts a measure file (its pi line is ignored) or a bare row matrix.
    std::istringstream text(read_all(path));
    std::ostringstream rows_only;
    for (std::string line; std::getline(text, line);) {
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw != "pi") rows_only << line << '\n';
    }
    std::istringstream in(rows_only.str());
    const SftSpec raw = parse_matrix(in);
    const StochasticMatrix p(raw.alphabet(), raw.matrix());
    const Distribution pi = stationary_distribution(p);
    write_measure(std::cout, p.labels(), &pi.weights(), p.entries(), precision);
    return kExitOk;
}

void print_witness(const Automaton& a, const CompatibilityWitness& w) {
    for (StateId q = 0; q < a.num_states(); ++q) {
        std::cout << "WITNESS " << a.state_name(q) << " iota=" << a.alphabet().token(w.iota[q]);
        if (!w.eta.empty()) std::cout << " eta=" << a.alphabet().token(w.eta[q]);
        std::cout << '\n';
    }
    for (StateId q : w.unconstrained_eta)
        std::cerr << "warning: UnconstrainedEta " << a.state_name(q) << " (defaulted to "
                  << a.alphabet().token(w.eta[q]) << ")\n";
}

int cmd_compat(const std::string& machine_path, bool automaton_only, const MeasureChoice& m) {
    std::optional<ParsedSelector> sel;
    std::optional<ParsedAutomaton> aut;
    if (automaton_only)
        aut = parse_automaton_file(machine_path);
    else
        sel = parse_selector_file(machine_path);
    const Automaton& a = sel ? sel->selector.automaton() : aut->automaton;
    const MarkovMeasure mu = m.load(a.alphabet());
    const auto result = sel ? check_selector_compatibility(sel->selector, mu, sel->declarations)
                            : check_automaton_compatibility(a, mu, aut->declarations);
    if (!result.compatible()) {
        for (const auto& v : result.violations)
            std::cout << "VIOLATION " << to_string(v.kind) << ' ' << v.location << ' ' << v.detail << '\n';
        return kExitDomain;
    }
    print_witness(a, *result.witness);
    const auto complete = is_shift_complete(a, mu, result.witness->iota);
    std::cout << "SHIFT_COMPLETE " << (complete.complete ? "yes" : "no") << '\n';
    for (const auto& [p, sym] : complete.missing)
        std::cout << "MISSING " << a.state_name(p) << ' ' << a.alphabet().token(sym) << '\n';
    return kExitOk;
}

struct LemmaOptions {
    std::string selector;
    MeasureChoice measure;
    std::size_t n_max = 12;
    std::size_t w_max = 6;
    std::string state;
    std::size_t max_enum = kDefaultEnumerationCap;
    std::size_t equirun_k = 0;
    double epsilon = 0.1;
    std::size_t equirun_n_max = 20;
};

void print_lemma(const Selector& s, const LemmaCheckResult& r) {
    std::cout << "LEMMA " << r.lemma << " p=" << s.state_name(r.state) << " n=" << r.n
              << " w=" << word_text(s.alphabet(), r.w) << " value=" << format_general(r.value);
    if (r.lower > 0.0) std::cout << " lower=" << format_general(r.lower);
    std::cout << " bound=" << format_general(r.bound) << (r.pass ? " PASS" : " FAIL") << '\n';
}

int cmd_lemma_check(const LemmaOptions& o) {
    const ParsedSelector parsed = parse_selector_file(o.selector);
    const Selector& s = parsed.selector;
    const MarkovMeasure mu = o.measure.load(s.alphabet());
    std::optional<CompatibilityWitness> witness;
    if (o.measure.markov()) {
        auto compat = check_selector_compatibility(s, mu, parsed.declarations);
        if (!compat.compatible()) {
            for (const auto& v : compat.violations)
                std::cout << "VIOLATION " << to_string(v.kind) << ' ' << v.location << ' ' << v.detail << '\n';
            return kExitDomain;
        }
        witness = std::move(compat.witness);
    }
    const auto oblivious = is_oblivious(s);
    if (!oblivious.oblivious) throw NotOblivious(s.state_name(*oblivious.witness));

    bool all = true;
    if (o.equirun_k > 0) {
        EquirunMode mode;
        if (witness) mode = MarkovMode{&mu, &*witness};
        const auto result = equirun_scan(s, o.equirun_k, o.epsilon, o.equirun_n_max, mode, o.max_enum);
        for (const auto& r : result.checks) print_lemma(s, r);
        std::cout << "EQUIRUN witness_n=" << (result.witness_n ? std::to_string(*result.witness_n) : "none") << '\n';
        return result.witness_n ? kExitOk : kExitCheck;
    }

    std::vector<StateId> states;
    if (o.state.empty())
        for (StateId p = 0; p < s.num_states(); ++p) states.push_back(p);
    else
        states.push_back(s.state_index(o.state));
    const std::size_t k = s.alphabet().size();
    for (StateId p : states) {
        for (std::size_t n = 0; n <= o.n_max; ++n) {
            const auto e = enumerate_runs(s, p, n, o.max_enum);
            for (std::size_t len = 0; len <= std::min(n, o.w_max); ++len) {
                for (const Word& w : all_words(k, len)) {
                    LemmaCheckResult r;
                    r.state = p;
                    r.n = n;
                    r.w = w;
                    if (witness) {
                        if (!word_in_support(mu, w)) continue;
                        r.lemma = "markov-upper";
                        r.value = measure_output_prefix(e, mu, witness->iota[p], w);
                        r.bound = conditional_word_measure(mu, witness->eta[p], w);
                        r.pass = r.value <= r.bound + kMeasureBoundTolerance;
                    } else {
                        r.lemma = "upper";
                        const std::size_t count = count_output_prefix(e, w);
                        const std::size_t bound = checked_pow(k, n - len);
                        r.value = static_cast<double>(count);
                        r.bound = static_cast<double>(bound);
                        r.pass = count <= bound;
                    }
                    all = all && r.pass;
                    print_lemma(s, r);
                }
            }
        }
    }
    return all ? kExitOk : kExitCheck;
}

int cmd_chain(const std::string& path, const MeasureChoice& m, int precision) {
    const ParsedAutomaton parsed = parse_automaton_file(path);
    const Automaton& a = parsed.automaton;
    StateChain chain = [&] {
        if (!m.markov()) return uniform_chain(a);
        const MarkovMeasure mu = m.load(a.alphabet());
        const auto compat = check_automaton_compatibility(a, mu, parsed.declarations);
        if (!compat.compatible()) throw NotCompatible("automaton is not compatible with the measure");
        return compatible_chain(a, mu, compat.witness->iota);
    }();
    const auto& pi = chain.require_stationary();
    write_measure(std::cout, chain.states, &pi, chain.transition, precision);
    return kExitOk;
}

int cmd_snake(const std::string& path, std::size_t n, const MeasureChoice& m, const std::string& weighting,
              int precision) {
    std::optional<SnakeDistribution> dist;
    std::optional<MarkovMeasure> mu;
    if (!m.markov()) {
        dist = snake_distribution(parse_automaton_file(path).automaton, n);
    } else {
        // A selector file gives eta as well; a plain automaton only iota.
        const ParsedAutomaton parsed = parse_automaton_file(path);
        mu = m.load(parsed.automaton.alphabet());
        CompatibilityResult compat;
        try {
            const ParsedSelector sel = parse_selector_file(path);
            compat = check_selector_compatibility(sel.selector, *mu, sel.declarations);
        } catch (const ParseError&) {
            compat = check_automaton_compatibility(parsed.automaton, *mu, parsed.declarations);
        }
        if (!compat.compatible()) throw NotCompatible("machine is not compatible with the measure");
        dist = snake_distribution(parsed.automaton, *mu, *compat.witness, n,
                                  weighting == "eta" ? SnakeWeighting::Eta : SnakeWeighting::Iota);
    }
    const StateChain chain = mu ? [&] {
        std::vector<Symbol> snake_iota;
        for (const auto& w : dist->snake.window) snake_iota.push_back(w.back());
        return compatible_chain(dist->snake.automaton, *mu, snake_iota);
    }()
                                : uniform_chain(dist->snake.automaton);
    std::cout << "# max_deviation " << format_general(dist->max_deviation) << '\n';
    write_measure(std::cout, chain.states, &dist->closed_form, chain.transition, precision);
    return kExitOk;
}

int cmd_select(const std::string& selector, const std::string& input) {
    const ParsedSelector parsed = parse_selector_file(selector);
    const Selector& s = parsed.selector;
    const Word x = s.alphabet().parse_word(read_all(input));
    std::cout << s.alphabet().format_word(apply_selector(s, x)) << '\n';
    return kExitOk;
}

int cmd_freq(const std::string& input, std::size_t k, const std::string& mode, const std::string& alphabet_spec,
             const MeasureChoice& m, bool with_targets) {
    std::optional<MarkovMeasure> mu;
    Alphabet alphabet = alphabet_from(alphabet_spec);
    if (m.markov()) {
        mu = parse_measure_file(m.path);
        alphabet = mu->alphabet();
    } else if (with_targets) {
        mu = make_uniform(alphabet);
    }
    const Word x = alphabet.parse_word(read_all(input));
    const auto report = block_frequencies(alphabet.size(), x, k, mode == "aligned" ? CountMode::Aligned : CountMode::Sliding);
    write_frequency_table(std::cout, report, alphabet, mu ? &*mu : nullptr);
    if (mu) std::cout << "# discrepancy=" << format_general(discrepancy(report, *mu)) << '\n';
    return kExitOk;
}

int cmd_gen(const std::string& kind, std::size_t n, std::uint64_t seed, const std::string& alphabet_spec,
            const MeasureChoice& m) {
    Alphabet alphabet = alphabet_from(alphabet_spec);
    std::optional<MarkovMeasure> mu;
    if (m.markov()) {
        mu = parse_measure_file(m.path);
        alphabet = mu->alphabet();
    }
    Word x;
    if (kind == "champernowne") {
        x = champernowne(alphabet, n);
    } else {
        if (!mu) mu = make_uniform(alphabet);
        x = sample_markov(*mu, seed, n);
    }
    std::cout << alphabet.format_word(x) << '\n';
    return kExitOk;
}

struct ExperimentOptions {
    std::string selector;
    MeasureChoice measure;
    std::string generator = "sample";
    std::string mode = "sliding";
    std::string out;
    std::size_t replicates = 1;
    ExperimentConfig config;
};

int exit_code_of(const ExperimentReport& r) {
    switch (r.status) {
        case ExperimentStatus::Pass: return kExitOk;
        case ExperimentStatus::ToleranceFailure: return kExitCheck;
        case ExperimentStatus::CompatibilityFailure: return kExitDomain;
    }
    return kExitCheck;
}

int cmd_experiment(ExperimentOptions o) {
    o.config.generator = o.generator == "champernowne" ? GeneratorKind::Champernowne : GeneratorKind::MarkovSample;
    o.config.mode = o.mode == "aligned" ? CountMode::Aligned : CountMode::Sliding;
    o.config.validate();
    const ParsedSelector parsed = parse_selector_file(o.selector);
    const Selector& s = parsed.selector;
    const MarkovMeasure mu = o.measure.load(s.alphabet());
    const CsvProvenance provenance{o.selector, file_fingerprint(o.selector), o.measure.describe()};

    // Independent seeds run on worker threads; each owns its generator and counters.
    std::vector<std::future<ExperimentReport>> jobs;
    for (std::size_t r = 0; r < o.replicates; ++r) {
        ExperimentConfig config = o.config;
        config.seed = o.config.seed + r;
        jobs.push_back(std::async(std::launch::async, [&, config] {
            return run_experiment(config, s, parsed.declarations, mu, o.measure.markov());
        }));
    }

    int worst = kExitOk;
    for (std::size_t r = 0; r < jobs.size(); ++r) {
        const ExperimentReport report = jobs[r].get();
        ExperimentConfig config = o.config;
        config.seed = o.config.seed + r;
        for (const auto& v : report.violations)
            std::cout << "VIOLATION " << to_string(v.kind) << ' ' << v.location << ' ' << v.detail << '\n';
        for (const auto& f : report.input)
            std::cout << "seed=" << config.seed << " input D_" << f.k << "=" << format_general(f.discrepancy) << '\n';
        for (const auto& f : report.output)
            std::cout << "seed=" << config.seed << " output D_" << f.k << "=" << format_general(f.discrepancy) << '\n';
        std::cout << "seed=" << config.seed << " output_length=" << report.output_length << " recurrent_entry="
                  << (report.recurrent_entry ? std::to_string(*report.recurrent_entry) : "none");
        if (report.markov_mode) std::cout << " forbidden_output_blocks=" << report.forbidden_output_blocks;
        std::cout << '\n';
        if (!report.message.empty()) std::cerr << "seed=" << config.seed << ": " << report.message << '\n';
        std::cout << "RESULT seed=" << config.seed << ' ' << (report.pass() ? "PASS" : "FAIL") << '\n';
        if (!o.out.empty()) {
            const std::string path = o.replicates == 1 ? o.out : o.out + "." + std::to_string(config.seed) + ".csv";
            std::ofstream csv(path);
            if (!csv) throw ValidationError("cannot write " + path);
            write_experiment_csv(csv, config, provenance, report, s.alphabet(), mu);
        }
        worst = std::max(worst, exit_code_of(report));
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-state selection over shifts of finite type"};
    app.require_subcommand(1);
    int precision = 10;
    app.add_option("--precision", precision, "decimals in printed matrices")->check(CLI::Range(1, 17));

    std::string matrix_path;
    auto* parry = app.add_subcommand("parry", "Parry measure of an SFT matrix");
    parry->add_option("matrix", matrix_path)->required();

    std::string stationary_path;
    auto* stationary = app.add_subcommand("stationary", "stationary distribution of a stochastic matrix");
    stationary->add_option("matrix", stationary_path)->required();

    std::string compat_path;
    bool compat_automaton = false;
    MeasureChoice compat_measure;
    auto* compat = app.add_subcommand("compat", "check compatibility of a selector with a measure");
    compat->add_option("--selector", compat_path)->required();
    compat->add_flag("--automaton", compat_automaton, "treat the file as a plain automaton");
    add_measure_options(compat, compat_measure);

    LemmaOptions lemma;
    auto* lemma_cmd = app.add_subcommand("lemma-check", "exhaustive run-count checks");
    lemma_cmd->add_option("--selector", lemma.selector)->required();
    add_measure_options(lemma_cmd, lemma.measure);
    lemma_cmd->add_option("--n-max", lemma.n_max, "largest run length");
    lemma_cmd->add_option("--w-max", lemma.w_max, "largest output prefix length");
    lemma_cmd->add_option("--state", lemma.state, "only check this state");
    lemma_cmd->add_option("--max-enum", lemma.max_enum, "largest number of runs to enumerate");
    lemma_cmd->add_option("--equirun", lemma.equirun_k, "scan for an equirun witness with this block length");
    lemma_cmd->add_option("--epsilon", lemma.epsilon, "equirun slack");
    lemma_cmd->add_option("--equirun-n-max", lemma.equirun_n_max, "largest run length for the equirun scan");

    std::string chain_path;
    MeasureChoice chain_measure;
    auto* chain = app.add_subcommand("chain", "Markov chain on the states of an automaton");
    chain->add_option("--automaton", chain_path)->required();
    add_measure_options(chain, chain_measure);

    std::string snake_path, snake_weighting = "iota";
    std::size_t snake_n = 1;
    MeasureChoice snake_measure;
    auto* snake = app.add_subcommand("snake", "snake chain and its closed-form distribution");
    snake->add_option("--automaton", snake_path)->required();
    snake->add_option("--n", snake_n)->check(CLI::PositiveNumber);
    snake->add_option("--weighting", snake_weighting)->check(CLI::IsMember({"iota", "eta"}));
    add_measure_options(snake, snake_measure);

    std::string select_path, select_input;
    auto* select = app.add_subcommand("select", "apply a selector to a sequence (stdin by default)");
    select->add_option("--selector", select_path)->required();
    select->add_option("input", select_input);

    std::string freq_input, freq_mode = "sliding", freq_alphabet = "0 1";
    std::size_t freq_k = 1;
    bool freq_targets = false;
    MeasureChoice freq_measure;
    auto* freq = app.add_subcommand("freq", "block frequencies of a sequence (stdin by default)");
    freq->add_option("input", freq_input);
    freq->add_option("--k", freq_k)->check(CLI::PositiveNumber);
    freq->add_option("--mode", freq_mode)->check(CLI::IsMember({"sliding", "aligned"}));
    freq->add_option("--alphabet", freq_alphabet, "symbols, space separated");
    freq->add_option("--measure", freq_measure.path, "compare against this measure");
    freq->add_flag("--uniform", freq_targets, "compare against the uniform measure");

    std::string gen_kind = "sample", gen_alphabet = "0 1";
    std::size_t gen_n = 1'000'000;
    std::uint64_t gen_seed = 1;
    MeasureChoice gen_measure;
    auto* gen = app.add_subcommand("gen", "generate a sequence");
    gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"champernowne", "sample"}));
    gen->add_option("--n", gen_n);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--alphabet", gen_alphabet);
    add_measure_options(gen, gen_measure);

    ExperimentOptions exp;
    auto* experiment = app.add_subcommand("experiment", "select from a generated sequence and measure frequencies");
    experiment->add_option("--selector", exp.selector)->required();
    add_measure_options(experiment, exp.measure);
    experiment->add_option("--generator", exp.generator)->check(CLI::IsMember({"sample", "champernowne"}));
    experiment->add_option("--seed", exp.config.seed);
    experiment->add_option("--n", exp.config.n);
    experiment->add_option("--k", exp.config.ks, "block length (repeatable)")->take_all()->delimiter(',');
    experiment->add_option("--mode", exp.mode)->check(CLI::IsMember({"sliding", "aligned"}));
    experiment->add_option("--tolerance", exp.config.tolerance);
    experiment->add_flag("--after-recurrent", exp.config.after_recurrent,
                         "count only after the run enters a recurrent component");
    experiment->add_option("--out", exp.out, "CSV report path");
    experiment->add_option("--replicates", exp.replicates, "independent consecutive seeds run in parallel")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*parry) return cmd_parry(matrix_path, precision);
        if (*stationary) return cmd_stationary(stationary_path, precision);
        if (*compat) return cmd_compat(compat_path, compat_automaton, compat_measure);
        if (*lemma_cmd) return cmd_lemma_check(lemma);
        if (*chain) return cmd_chain(chain_path, chain_measure, precision);
        if (*snake) return cmd_snake(snake_path, snake_n, snake_measure, snake_weighting, precision);
        if (*select) return cmd_select(select_path, select_input);
        if (*freq) return cmd_freq(freq_input, freq_k, freq_mode, freq_alphabet, freq_measure, freq_targets);
        if (*gen) return cmd_gen(gen_kind, gen_n, gen_seed, gen_alphabet, gen_measure);
        if (*experiment) return cmd_experiment(exp);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnknownSymbol& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}
