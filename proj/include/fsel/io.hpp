#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsel/automaton.hpp"
#include "fsel/compatibility.hpp"
#include "fsel/measures.hpp"

// Line-based text formats. '#' starts a comment; tokens are separated by
// whitespace.
//
//   alphabet 0 1
//   states q0 q1
//   initial q0
//   iota q0 0            (optional)
//   eta q0 0             (optional)
//   trans q0 1 drop q1   (selectors; automata omit the action)
//
// Measures: `alphabet`, `pi w1 .. wk`, then one `row` per symbol.
// SFT matrices: `alphabet`, then one `row` per symbol.
namespace fsel {

struct ParsedSelector {
    Selector selector;
    Declarations declarations;
};

struct ParsedAutomaton {
    Automaton automaton;
    Declarations declarations;
};

/// Throws ParseError (with line) for malformed or duplicate lines and
/// ValidationError for semantically invalid content.
ParsedSelector parse_selector(std::istream& in);
/// Accepts selector files too; the action column is then ignored.
ParsedAutomaton parse_automaton(std::istream& in);
MarkovMeasure parse_measure(std::istream& in);
SftSpec parse_matrix(std::istream& in);

ParsedSelector parse_selector_file(const std::filesystem::path& path);
ParsedAutomaton parse_automaton_file(const std::filesystem::path& path);
MarkovMeasure parse_measure_file(const std::filesystem::path& path);
SftSpec parse_matrix_file(const std::filesystem::path& path);

void write_selector(std::ostream& out, const Selector& s, const Declarations& declarations = {});
void write_automaton(std::ostream& out, const Automaton& a, const Declarations& declarations = {});

/// Writes `alphabet`, optional `pi`, and `row` lines with `precision` decimals.
void write_measure(std::ostream& out, const Alphabet& labels, const std::vector<double>* pi, const Matrix& rows,
                   int precision);

std::string format_fixed(double value, int precision);

/// FNV-1a over the bytes of a file, as 16 hex digits.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace fsel
