#include "tokpack/log_template.hpp"

#include <unordered_set>

#include "tokpack/errors.hpp"
#include "tokpack/meta_token.hpp"

namespace tokpack {

namespace {

constexpr std::string_view kSlot = "<*>";

// Literal segments around the wildcards: segments.size() == slots + 1.
std::vector<std::string_view> split_pattern(std::string_view pattern) {
    std::vector<std::string_view> segments;
    std::size_t pos = 0;
    while (true) {
        std::size_t slot = pattern.find(kSlot, pos);
        if (slot == std::string_view::npos) break;
        segments.push_back(pattern.substr(pos, slot - pos));
        pos = slot + kSlot.size();
    }
    segments.push_back(pattern.substr(pos));
    return segments;
}


// Lazy matching with backtracking: each wildcard tries the shortest capture
// first, so the overall match is deterministic.
bool match_segments(std::string_view line, const std::vector<std::string_view>& segments,
                    std::size_t seg_idx, std::vector<std::string>& slots) {
    std::string_view seg = segments[seg_idx];
    if (seg_idx + 1 == segments.size()) return line == seg;
    if (line.substr(0, seg.size()) != seg) return false;
    std::string_view rest = line.substr(seg.size());

    // Try capture lengths 1..; the remaining segments must match the suffix.
    for (std::size_t len = 1; len <= rest.size(); ++len) {
        std::string_view capture = rest.substr(0, len);
        if (capture.back() == kUnitSeparator) return false;  // longer captures keep it too
        slots.emplace_back(capture);
        std::string_view tail = rest.substr(len);
        // Cheap prefix test before recursing; the recursion re-checks it.
        std::string_view next = segments[seg_idx + 1];
        if (seg_idx + 2 == segments.size() ? tail == next
                                           : tail.substr(0, next.size()) == next) {
            if (match_segments(tail, segments, seg_idx + 1, slots)) return true;
        }
        slots.pop_back();
    }
    return false;
}

} // namespace

std::size_t count_slots(std::string_view pattern) {
    std::size_t n = 0, pos = 0;
    while ((pos = pattern.find(kSlot, pos)) != std::string_view::npos) {
        ++n;
        pos += kSlot.size();
    }
    return n;
}

LogTemplate make_template(std::string id, std::string pattern) {
    LogTemplate t;
    t.slot_count = count_slots(pattern);
    t.id = std::move(id);
    t.pattern = std::move(pattern);
    return t;
}

std::vector<LogTemplate> parse_template_file(std::string_view content) {
    std::vector<LogTemplate> templates;
    std::unordered_set<std::string> seen;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string_view line = content.substr(pos, eol == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : eol - pos);
        pos = eol == std::string_view::npos ? content.size() + 1 : eol + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos)
            throw ParseError("template file line " + std::to_string(lineno) +
                             ": expected label<TAB>pattern");
        std::string label(line.substr(0, tab));
        std::string pattern(line.substr(tab + 1));
        if (!is_meta_word(label))
            throw ParseError("template file line " + std::to_string(lineno) + ": label '" + label +
                             "' is not of the form <M#>");
        if (!seen.insert(label).second)
            throw ParseError("template file line " + std::to_string(lineno) +
                             ": duplicate label " + label);
        templates.push_back(make_template(std::move(label), std::move(pattern)));
    }
    return templates;
}

std::optional<TemplateMatch> match_template(std::string_view line, const LogTemplate& tmpl) {
    auto segments = split_pattern(tmpl.pattern);
    TemplateMatch m;
    m.slots.reserve(tmpl.slot_count);
    if (!match_segments(line, segments, 0, m.slots)) return std::nullopt;
    return m;
}

std::optional<std::string> template_compress_match(std::string_view line,
                                                   const std::vector<LogTemplate>& templates) {
    for (const auto& tmpl : templates) {
        auto m = match_template(line, tmpl);
        if (!m) continue;
        std::string out = tmpl.id;
        for (const auto& slot : m->slots) {
            out += kUnitSeparator;
            out += slot;
        }
        return out;
    }
    return std::nullopt;
}

std::string template_compress_line(std::string_view line,
                                   const std::vector<LogTemplate>& templates) {
    auto m = template_compress_match(line, templates);
    return m ? std::move(*m) : std::string(line);
}

std::string template_decompress_line(std::string_view line,
                                     const std::vector<LogTemplate>& templates) {
    auto m = find_meta_pattern(line);
    if (!m || m->begin != 0) return std::string(line);  // not a compressed record
    std::string_view label = m->label;
    std::string_view rest = line.substr(m->end);
    if (!rest.empty() && rest.front() != kUnitSeparator) return std::string(line);

    const LogTemplate* tmpl = nullptr;
    for (const auto& t : templates)
        if (t.id == label) {
            tmpl = &t;
            break;
        }
    // A compressed record always carries a known id; anything else is an
    // original line that happens to start with a meta pattern.
    if (!tmpl) return std::string(line);

    std::vector<std::string_view> values;
    while (!rest.empty()) {
        rest.remove_prefix(1);  // unit separator
        std::size_t next = rest.find(kUnitSeparator);
        values.push_back(rest.substr(0, next));
        rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next);
    }
    if (values.size() != tmpl->slot_count)
        throw ReconstructionError("template " + std::string(label) + " expects " +
                                  std::to_string(tmpl->slot_count) + " slot(s), got " +
                                  std::to_string(values.size()));

    auto segments = split_pattern(tmpl->pattern);
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        out += segments[i];
        if (i < values.size()) out += values[i];
    }
    return out;
}

std::vector<std::string> template_compress_corpus(const std::vector<std::string>& lines,
                                                  const std::vector<LogTemplate>& templates,
                                                  TemplateStats* stats) {
    std::vector<std::string> out;
    out.reserve(lines.size());
    TemplateStats s;
    for (const auto& line : lines) {
        ++s.total_lines;
        auto m = template_compress_match(line, templates);
        if (m) {
            ++s.matched_lines;
            out.push_back(std::move(*m));
        } else {
            out.push_back(line);
        }
    }
    if (stats) *stats = s;
    return out;
}

} // namespace tokpack
