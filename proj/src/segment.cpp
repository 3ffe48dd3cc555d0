#include "tokpack/segment.hpp"

#include <stdexcept>

namespace tokpack {

bool is_separator_char(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

WordSequence segment(std::string_view text) {
    WordSequence seq;
    seq.separators.clear();
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (true) {
        std::size_t sep_start = i;
        while (i < n && is_separator_char(text[i])) ++i;
        seq.separators.emplace_back(text.substr(sep_start, i - sep_start));
        if (i == n) break;
        std::size_t word_start = i;
        while (i < n && !is_separator_char(text[i])) ++i;
        seq.words.emplace_back(text.substr(word_start, i - word_start));
    }
    return seq;
}

std::string render(const WordSequence& seq) {
    std::string out;
    std::size_t total = 0;
    for (const auto& s : seq.separators) total += s.size();
    for (const auto& w : seq.words) total += w.size();
    out.reserve(total);
    for (std::size_t i = 0; i < seq.words.size(); ++i) {
        out += seq.separators[i];
        out += seq.words[i];
    }
    out += seq.separators.back();
    return out;
}

std::string render_span(const WordSequence& seq, std::size_t start, std::size_t count) {
    if (start > seq.size() || count > seq.size() - start)
        throw std::out_of_range("render_span: span [" + std::to_string(start) + ", +" +
                                std::to_string(count) + ") exceeds " + std::to_string(seq.size()) +
                                " words");
    std::string out;
    for (std::size_t i = start; i < start + count; ++i) {
        if (i > start) out += seq.separators[i];
        out += seq.words[i];
    }
    return out;
}

} // namespace tokpack
