#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tokpack {

/// Separator-preserving word sequence. `separators` has size words+1:
/// separators[i] precedes words[i], separators[size()] trails the text.
/// Leading/trailing separators may be empty; interior ones are non-empty
/// whitespace runs. Rendering is the exact inverse of segmentation.
struct WordSequence {
    std::vector<std::string> words;
    std::vector<std::string> separators{""};

    std::size_t size() const { return words.size(); }
    bool empty() const { return words.empty(); }

    bool operator==(const WordSequence&) const = default;
};

/// Whitespace for segmentation purposes: space, tab, CR, LF, FF, VT.
bool is_separator_char(char c);

/// Splits text into maximal non-whitespace runs, keeping every separator.
WordSequence segment(std::string_view text);

/// Exact inverse of segment: render(segment(t)) == t byte for byte.
std::string render(const WordSequence& seq);

/// Text of words [start, start+count) joined with their interior separators;
/// boundary separators are excluded. Throws std::out_of_range on bad spans.
std::string render_span(const WordSequence& seq, std::size_t start, std::size_t count);

} // namespace tokpack
