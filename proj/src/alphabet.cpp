#include "fsel/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_set>

#include "fsel/error.hpp"

namespace fsel {

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) throw ValidationError("alphabet must contain at least one symbol");
    std::unordered_set<std::string> seen;
    for (const auto& t : tokens_) {
        if (t.empty()) throw ValidationError("empty symbol token");
        if (t == kEpsilonToken) throw ValidationError("'eps' is reserved and cannot be a symbol");
        if (!seen.insert(t).second) throw ValidationError("duplicate symbol '" + t + "'");
        if (std::any_of(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }))
            throw ValidationError("symbol token contains whitespace");
        if (t.size() != 1) single_char_ = false;
    }
}

Symbol Alphabet::index_of(std::string_view token) const {
    for (std::size_t i = 0; i < tokens_.size(); ++i)
        if (tokens_[i] == token) return static_cast<Symbol>(i);
    throw UnknownSymbol(std::string(token));
}

bool Alphabet::contains(std::string_view token) const noexcept {
    return std::find(tokens_.begin(), tokens_.end(), token) != tokens_.end();
}

Word Alphabet::parse_word(std::string_view text) const {
    Word w;
    if (single_char_) {
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            w.push_back(index_of(std::string_view(&c, 1)));
        }
        return w;
    }
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) w.push_back(index_of(text.substr(i, j - i)));
        i = j;
    }
    return w;
}

std::string Alphabet::format_word(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!single_char_ && i > 0) out += ' ';
        out += token(w[i]);
    }
    return out;
}

std::size_t checked_pow(std::size_t base, std::size_t exponent) noexcept {
    std::size_t result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (base != 0 && result > std::numeric_limits<std::size_t>::max() / base)
            return std::numeric_limits<std::size_t>::max();
        result *= base;
    }
    return result;
}

std::vector<Word> all_words(std::size_t alphabet_size, std::size_t n) {
    const std::size_t count = checked_pow(alphabet_size, n);
    std::vector<Word> words;
    words.reserve(count);
    for (std::size_t r = 0; r < count; ++r) words.push_back(unrank_word(r, alphabet_size, n));
    return words;
}

std::size_t rank_word(const Word& w, std::size_t alphabet_size) noexcept {
    std::size_t r = 0;
    for (Symbol a : w) r = r * alphabet_size + a;
    return r;
}

Word unrank_word(std::size_t rank, std::size_t alphabet_size, std::size_t length) {
    Word w(length);
    for (std::size_t i = length; i-- > 0;) {
        w[i] = static_cast<Symbol>(rank % alphabet_size);
        rank /= alphabet_size;
    }
    return w;
}

bool is_prefix(const Word& u, const Word& v) noexcept {
    return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

bool is_subsequence(const Word& u, const Word& v) noexcept {
    std::size_t i = 0;
    for (std::size_t j = 0; j < v.size() && i < u.size(); ++j)
        if (u[i] == v[j]) ++i;
    return i == u.size();
}

}  // namespace fsel
