#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "tokpack/segment.hpp"

namespace tokpack {

/// Pluggable token-count function. All built-in models are per-word
/// additive: cost(text) is the sum of per-word costs over the segmented
/// words, and separators cost nothing. Additivity is what makes the
/// per-entry savings condition imply net savings for the whole run.
class CostModel {
public:
    using WordCostFn = std::function<std::int64_t(std::string_view)>;

    CostModel() : CostModel(word_unit()) {}
    CostModel(std::string name, WordCostFn word_cost)
        : name_(std::move(name)), word_cost_(std::move(word_cost)) {}

    const std::string& name() const { return name_; }

    /// Cost of one word unit (word or meta label). Deterministic.
    std::int64_t word_cost(std::string_view word) const { return word_cost_(word); }

    /// Cost of arbitrary text: segments and sums word costs. cost("") == 0.
    std::int64_t cost(std::string_view text) const;
    std::int64_t cost(const WordSequence& seq) const;

    /// Every word or meta label costs one token.
    static CostModel word_unit();

    /// Each word costs ceil(bytes/4), minimum 1 per non-empty word.
    static CostModel char_heuristic();

    /// Counts from a `word<TAB>count` table; unknown words fall back to the
    /// char heuristic. Throws ParseError on malformed rows.
    static CostModel external_table(const std::filesystem::path& path);

    /// Parses a CLI selector: "word", "char", or "external:<path>".
    static CostModel from_spec(std::string_view spec);

private:
    std::string name_;
    WordCostFn word_cost_;
};

/// Per-word cost used by the char-heuristic model and as the external-table
/// fallback for unknown words.
std::int64_t char_heuristic_word_cost(std::string_view word);

/// Token count of the rendered span [start, start+count) under `model`.
/// Throws std::out_of_range on bad spans.
std::int64_t cost_of_span(const WordSequence& seq, std::size_t start, std::size_t count,
                          const CostModel& model);

} // namespace tokpack
