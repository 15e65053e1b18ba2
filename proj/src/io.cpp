#include "fsel/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "fsel/error.hpp"

namespace fsel {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
    std::vector<Line> lines;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
        std::istringstream ss(text);
        Line line{number, {}};
        for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

double parse_number(const std::string& tok, std::size_t line) {
    double value = 0.0;
    const char* first = tok.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw ParseError(line, "expected a number, got '" + tok + "'");
    return value;
}

Alphabet parse_alphabet_line(const Line& line) {
    if (line.tokens.size() < 2) throw ParseError(line.number, "alphabet needs at least one symbol");
    try {
        return Alphabet({line.tokens.begin() + 1, line.tokens.end()});
    } catch (const ValidationError& e) {
        throw ParseError(line.number, e.what());
    }
}

Symbol symbol_at(const Alphabet& alphabet, const std::string& tok, std::size_t line) {
    if (!alphabet.contains(tok)) throw ParseError(line, "unknown symbol '" + tok + "'");
    return alphabet.index_of(tok);
}

struct MachineText {
    Alphabet alphabet;
    std::vector<std::string> states;
    std::map<std::string, StateId> state_index;
    StateId initial = 0;
    std::vector<std::optional<Step>> table;
    bool has_actions = false;
    Declarations declarations;
};

// `actions`: true = required, false = forbidden, nullopt = either.
MachineText parse_machine(std::istream& in, std::optional<bool> actions) {
    MachineText m;
    bool have_alphabet = false, have_states = false, have_initial = false;
    std::map<std::pair<StateId, Symbol>, std::size_t> seen;

    const auto state_at = [&](const std::string& tok, std::size_t line) {
        const auto it = m.state_index.find(tok);
        if (it == m.state_index.end()) throw ParseError(line, "unknown state '" + tok + "'");
        return it->second;
    };

    for (const auto& line : tokenize(in)) {
        const auto& t = line.tokens;
        const std::string& kw = t[0];
        if (kw == "alphabet") {
            if (have_alphabet) throw ParseError(line.number, "duplicate alphabet line");
            m.alphabet = parse_alphabet_line(line);
            have_alphabet = true;
        } else if (kw == "states") {
            if (have_states) throw ParseError(line.number, "duplicate states line");
            if (t.size() < 2) throw ParseError(line.number, "states needs at least one state");
            for (std::size_t i = 1; i < t.size(); ++i) {
                if (t[i] == kEpsilonToken) throw ParseError(line.number, "'eps' is reserved");
                if (!m.state_index.emplace(t[i], static_cast<StateId>(m.states.size())).second)
                    throw ParseError(line.number, "duplicate state '" + t[i] + "'");
                m.states.push_back(t[i]);
            }
            have_states = true;
        } else if (!have_alphabet || !have_states) {
            throw ParseError(line.number, "'" + kw + "' before the alphabet and states lines");
        } else if (kw == "initial") {
            if (have_initial) throw ParseError(line.number, "duplicate initial line");
            if (t.size() != 2) throw ParseError(line.number, "expected: initial <state>");
            m.initial = state_at(t[1], line.number);
            have_initial = true;
        } else if (kw == "iota" || kw == "eta") {
            if (t.size() != 3) throw ParseError(line.number, "expected: " + kw + " <state> <symbol>");
            auto& target = kw == "iota" ? m.declarations.iota : m.declarations.eta;
            const StateId q = state_at(t[1], line.number);
            if (!target.emplace(q, symbol_at(m.alphabet, t[2], line.number)).second)
                throw ParseError(line.number, "duplicate " + kw + " declaration for " + t[1]);
        } else if (kw == "trans") {
            const bool with_action = t.size() == 5;
            if (t.size() != 4 && t.size() != 5) throw ParseError(line.number, "expected: trans <src> <symbol> [keep|drop] <dst>");
            if (actions == true && !with_action) throw ParseError(line.number, "selector transitions need keep|drop");
            if (actions == false && with_action) throw ParseError(line.number, "automaton transitions take no action");
            if (m.table.empty()) m.table.resize(m.states.size() * m.alphabet.size());
            const StateId src = state_at(t[1], line.number);
            const Symbol sym = symbol_at(m.alphabet, t[2], line.number);
            const StateId dst = state_at(t[with_action ? 4 : 3], line.number);
            Action act = Action::Drop;
            if (with_action) {
                if (t[3] == "keep") act = Action::Keep;
                else if (t[3] != "drop") throw ParseError(line.number, "action must be keep or drop, got '" + t[3] + "'");
                m.has_actions = true;
            }
            if (const auto [it, fresh] = seen.emplace(std::pair{src, sym}, line.number); !fresh)
                throw ParseError(line.number, "duplicate transition from " + t[1] + " on " + t[2] + " (first at line " +
                                                  std::to_string(it->second) + ")");
            m.table[src * m.alphabet.size() + sym] = Step{dst, act};
        } else {
            throw ParseError(line.number, "unknown keyword '" + kw + "'");
        }
    }
    if (!have_alphabet) throw ParseError(0, "missing alphabet line");
    if (!have_states) throw ParseError(0, "missing states line");
    if (!have_initial) throw ParseError(0, "missing initial line");
    if (m.table.empty()) m.table.resize(m.states.size() * m.alphabet.size());
    return m;
}

std::vector<std::vector<double>> parse_rows(const std::vector<Line>& lines, std::size_t first, const Alphabet& alphabet) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = first; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.tokens[0] != "row") throw ParseError(line.number, "expected a row line, got '" + line.tokens[0] + "'");
        if (line.tokens.size() != alphabet.size() + 1)
            throw ParseError(line.number, "row needs " + std::to_string(alphabet.size()) + " entries");
        std::vector<double> row;
        for (std::size_t j = 1; j < line.tokens.size(); ++j) row.push_back(parse_number(line.tokens[j], line.number));
        rows.push_back(std::move(row));
    }
    if (rows.size() != alphabet.size())
        throw ParseError(lines.empty() ? 0 : lines.back().number,
                         "expected " + std::to_string(alphabet.size()) + " row lines, got " + std::to_string(rows.size()));
    return rows;
}

template <typename F>
auto with_file(const std::filesystem::path& path, F&& parse) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    return parse(in);
}

}  // namespace

ParsedSelector parse_selector(std::istream& in) {
    MachineText m = parse_machine(in, true);
    return {Selector(m.alphabet, m.states, m.initial, std::move(m.table)), std::move(m.declarations)};
}

ParsedAutomaton parse_automaton(std::istream& in) {
    MachineText m = parse_machine(in, std::nullopt);
    std::vector<std::optional<StateId>> delta(m.table.size());
    for (std::size_t i = 0; i < m.table.size(); ++i)
        if (m.table[i]) delta[i] = m.table[i]->target;
    return {Automaton(m.alphabet, m.states, m.initial, std::move(delta)), std::move(m.declarations)};
}

MarkovMeasure parse_measure(std::istream& in) {
    const auto lines = tokenize(in);
    if (lines.size() < 2 || lines[0].tokens[0] != "alphabet")
        throw ParseError(lines.empty() ? 0 : lines[0].number, "measure must start with alphabet and pi lines");
    const Alphabet alphabet = parse_alphabet_line(lines[0]);
    const auto& pi_line = lines[1];
    if (pi_line.tokens[0] != "pi" || pi_line.tokens.size() != alphabet.size() + 1)
        throw ParseError(pi_line.number, "expected: pi followed by " + std::to_string(alphabet.size()) + " weights");
    std::vector<double> pi;
    for (std::size_t j = 1; j < pi_line.tokens.size(); ++j) pi.push_back(parse_number(pi_line.tokens[j], pi_line.number));
    const auto rows = parse_rows(lines, 2, alphabet);
    try {
        return MarkovMeasure(Distribution(alphabet, std::move(pi)), StochasticMatrix(alphabet, Matrix::from_rows(rows)));
    } catch (const WeightsNotNormalized& e) {
        throw ValidationError(e.what());
    }
}

SftSpec parse_matrix(std::istream& in) {
    const auto lines = tokenize(in);
    if (lines.empty() || lines[0].tokens[0] != "alphabet")
        throw ParseError(lines.empty() ? 0 : lines[0].number, "matrix must start with an alphabet line");
    const Alphabet alphabet = parse_alphabet_line(lines[0]);
    return SftSpec(alphabet, Matrix::from_rows(parse_rows(lines, 1, alphabet)));
}

ParsedSelector parse_selector_file(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return parse_selector(in); });
}
ParsedAutomaton parse_automaton_file(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return parse_automaton(in); });
}
MarkovMeasure parse_measure_file(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return parse_measure(in); });
}
SftSpec parse_matrix_file(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return parse_matrix(in); });
}

namespace {

void write_header(std::ostream& out, const Automaton& a, const Declarations& declarations) {
    out << "alphabet";
    for (const auto& t : a.alphabet().tokens()) out << ' ' << t;
    out << "\nstates";
    for (const auto& s : a.state_names()) out << ' ' << s;
    out << "\ninitial " << a.state_name(a.initial()) << '\n';
    for (const auto& [q, sym] : declarations.iota) out << "iota " << a.state_name(q) << ' ' << a.alphabet().token(sym) << '\n';
    for (const auto& [q, sym] : declarations.eta) out << "eta " << a.state_name(q) << ' ' << a.alphabet().token(sym) << '\n';
}

}  // namespace

void write_selector(std::ostream& out, const Selector& s, const Declarations& declarations) {
    write_header(out, s.automaton(), declarations);
    for (const auto& e : s.automaton().edges())
        out << "trans " << s.state_name(e.source) << ' ' << s.alphabet().token(e.symbol) << ' '
            << to_string(s.next(e.source, e.symbol)->action) << ' ' << s.state_name(e.target) << '\n';
}

void write_automaton(std::ostream& out, const Automaton& a, const Declarations& declarations) {
    write_header(out, a, declarations);
    for (const auto& e : a.edges())
        out << "trans " << a.state_name(e.source) << ' ' << a.alphabet().token(e.symbol) << ' '
            << a.state_name(e.target) << '\n';
}

std::string format_fixed(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    return buf;
}

void write_measure(std::ostream& out, const Alphabet& labels, const std::vector<double>* pi, const Matrix& rows,
                   int precision) {
    out << "alphabet";
    for (const auto& t : labels.tokens()) out << ' ' << t;
    out << '\n';
    if (pi) {
        out << "pi";
        for (double v : *pi) out << ' ' << format_fixed(v, precision);
        out << '\n';
    }
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        out << "row";
        for (std::size_t j = 0; j < rows.cols(); ++j) out << ' ' << format_fixed(rows(i, j), precision);
        out << '\n';
    }
}

std::string file_fingerprint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (char c; in.get(c);) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << hash;
    return ss.str();
}

}  // namespace fsel
