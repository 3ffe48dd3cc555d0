#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tokpack {

/// Wildcard pattern paired with a meta label. `<*>` slots match non-empty
/// runs (shortest first, full-line anchored); literal segments match
/// byte-exact. Wildcards never match the unit separator so that encoding
/// stays reversible.
struct LogTemplate {
    std::string id;       // meta label, e.g. "<M1>"
    std::string pattern;  // e.g. "connected to <*>"
    std::size_t slot_count = 0;

    bool operator==(const LogTemplate&) const = default;
};

/// Delimiter between the meta label and captured slot values in a
/// template-compressed line (U+001F unit separator).
inline constexpr char kUnitSeparator = '\x1f';

/// Counts `<*>` occurrences.
std::size_t count_slots(std::string_view pattern);

LogTemplate make_template(std::string id, std::string pattern);

/// Parses newline-delimited `label<TAB>pattern` records. Throws ParseError
/// on malformed rows or duplicate labels.
std::vector<LogTemplate> parse_template_file(std::string_view content);

struct TemplateMatch {
    std::vector<std::string> slots;  // captured wildcard values, in order
};

/// Full-line match of `line` against one template.
std::optional<TemplateMatch> match_template(std::string_view line, const LogTemplate& tmpl);

/// First matching template in list order wins; the line becomes the label
/// followed by each slot value prefixed with the unit separator. Returns
/// nullopt when no template matches.
std::optional<std::string> template_compress_match(std::string_view line,
                                                   const std::vector<LogTemplate>& templates);

/// Like template_compress_match, but unmatched lines pass through unchanged.
std::string template_compress_line(std::string_view line, const std::vector<LogTemplate>& templates);

/// Inverse of template_compress_line for matched lines. Lines that do not
/// start with a known label + unit-separator framing pass through unchanged.
/// Throws ReconstructionError on slot-count mismatch.
std::string template_decompress_line(std::string_view line,
                                     const std::vector<LogTemplate>& templates);

struct TemplateStats {
    std::size_t total_lines = 0;
    std::size_t matched_lines = 0;
};

/// Compresses every line, tallying match coverage.
std::vector<std::string> template_compress_corpus(const std::vector<std::string>& lines,
                                                  const std::vector<LogTemplate>& templates,
                                                  TemplateStats* stats = nullptr);

} // namespace tokpack
