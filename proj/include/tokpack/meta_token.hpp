#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tokpack {

/// Placeholder label substituted for a repeated subsequence. Labels have the
/// exact form <M{index}> with index >= 1 and no leading zeros.
struct MetaToken {
    std::uint64_t index = 0;
    std::string label;
};

/// Builds the canonical label for an index, e.g. 3 -> "<M3>".
std::string meta_label(std::uint64_t index);

MetaToken make_meta_token(std::uint64_t index);

/// True if `word` is exactly a meta label: full match of <M[0-9]+>.
bool is_meta_word(std::string_view word);

/// True if `text` contains any substring matching <M[0-9]+>.
bool contains_meta_pattern(std::string_view text);

/// Position and extent of one <M[0-9]+> match inside a string.
struct MetaMatch {
    std::size_t begin = 0;  // offset of '<'
    std::size_t end = 0;    // offset one past '>'
    std::string_view label;
    /// Numeric index; nullopt when the digit run overflows uint64 (such a
    /// label can never collide with a generated one).
    std::optional<std::uint64_t> index;
};

/// Finds the first meta pattern at or after `from`, or nullopt.
std::optional<MetaMatch> find_meta_pattern(std::string_view text, std::size_t from = 0);

/// Largest parseable meta index occurring anywhere in `text` (substring
/// scan), or 0 when none. Used to start fresh labels above reserved ones.
std::uint64_t max_meta_index(std::string_view text);

} // namespace tokpack
