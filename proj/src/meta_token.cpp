#include "tokpack/meta_token.hpp"

#include <limits>

namespace tokpack {

std::string meta_label(std::uint64_t index) {
    return "<M" + std::to_string(index) + ">";
}

MetaToken make_meta_token(std::uint64_t index) {
    return MetaToken{index, meta_label(index)};
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Parses text[from..] as "<M" digits ">"; returns offset past '>' or 0.
std::size_t match_at(std::string_view text, std::size_t from) {
    if (from + 4 > text.size()) return 0;  // shortest match is <M0>
    if (text[from] != '<' || text[from + 1] != 'M') return 0;
    std::size_t i = from + 2;
    while (i < text.size() && is_digit(text[i])) ++i;
    if (i == from + 2) return 0;  // no digits
    if (i >= text.size() || text[i] != '>') return 0;
    return i + 1;
}

std::optional<std::uint64_t> parse_index(std::string_view digits) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t value = 0;
    for (char c : digits) {
        std::uint64_t d = static_cast<std::uint64_t>(c - '0');
        if (value > (kMax - d) / 10) return std::nullopt;
        value = value * 10 + d;
    }
    return value;
}

} // namespace

bool is_meta_word(std::string_view word) {
    return match_at(word, 0) == word.size() && !word.empty();
}

std::optional<MetaMatch> find_meta_pattern(std::string_view text, std::size_t from) {
    for (std::size_t i = from; i + 4 <= text.size(); ++i) {
        if (text[i] != '<') continue;
        std::size_t end = match_at(text, i);
        if (end == 0) continue;
        MetaMatch m;
        m.begin = i;
        m.end = end;
        m.label = text.substr(i, end - i);
        m.index = parse_index(text.substr(i + 2, end - i - 3));
        return m;
    }
    return std::nullopt;
}

bool contains_meta_pattern(std::string_view text) {
    return find_meta_pattern(text).has_value();
}

std::uint64_t max_meta_index(std::string_view text) {
    std::uint64_t best = 0;
    std::size_t pos = 0;
    while (auto m = find_meta_pattern(text, pos)) {
        if (m->index && *m->index > best) best = *m->index;
        pos = m->end;
    }
    return best;
}

} // namespace tokpack
