#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fsel {

/// Index of a symbol within its alphabet.
using Symbol = std::uint32_t;
/// Finite word over an alphabet, as symbol indices.
using Word = std::vector<Symbol>;

// Ordered set of distinct symbol tokens. The declaration order is the order
// used by lexicographic enumeration and by inverse-CDF sampling.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> tokens);

    std::size_t size() const noexcept { return tokens_.size(); }
    const std::string& token(Symbol a) const { return tokens_.at(a); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    /// Throws UnknownSymbol.
    Symbol index_of(std::string_view token) const;
    bool contains(std::string_view token) const noexcept;

    /// True when every token is a single character, so words print without separators.
    bool single_char() const noexcept { return single_char_; }

    /// Parses a word: character by character for single-character alphabets,
    /// whitespace-separated tokens otherwise. Whitespace is ignored in both cases.
    Word parse_word(std::string_view text) const;
    std::string format_word(const Word& w) const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.tokens_ == b.tokens_; }

private:
    std::vector<std::string> tokens_;
    bool single_char_ = true;
};

/// Reserved token for the empty word in file formats.
inline constexpr std::string_view kEpsilonToken = "eps";

/// Integer power k^n, saturating at SIZE_MAX.
std::size_t checked_pow(std::size_t base, std::size_t exponent) noexcept;

/// All words of length n in lexicographic order (alphabet order), as a flat
/// list. Intended for small n only.
std::vector<Word> all_words(std::size_t alphabet_size, std::size_t n);

/// Mixed-radix rank of w (most significant symbol first); inverse of unrank_word.
std::size_t rank_word(const Word& w, std::size_t alphabet_size) noexcept;
Word unrank_word(std::size_t rank, std::size_t alphabet_size, std::size_t length);

/// True when u is a prefix of v.
bool is_prefix(const Word& u, const Word& v) noexcept;
/// True when u is a subsequence (scattered subword) of v.
bool is_subsequence(const Word& u, const Word& v) noexcept;

}  // namespace fsel
