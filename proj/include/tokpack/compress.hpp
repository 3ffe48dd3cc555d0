#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tokpack/cost_model.hpp"
#include "tokpack/dictionary.hpp"
#include "tokpack/meta_token.hpp"
#include "tokpack/segment.hpp"

namespace tokpack {

struct CompressionParams {
    std::size_t l_max = 10;
    std::size_t l_min = 2;
    std::size_t f_min = 2;
    CostModel cost_model = CostModel::word_unit();

    /// Throws std::invalid_argument unless l_max >= l_min >= 2 and f_min >= 2.
    void validate() const;
};

/// One admitted subsequence: where it occurs and what replaces it.
struct Selection {
    std::string subsequence;            // rendered span, interior separators included
    std::vector<std::size_t> positions; // sorted start indices, pairwise non-overlapping
    MetaToken meta;
    std::size_t length = 0;             // word count
};

struct CompressionResult {
    WordSequence compressed;
    Dictionary dictionary;
    std::int64_t original_tokens = 0;
    std::int64_t compressed_tokens = 0;
    std::int64_t dictionary_tokens = 0;

    std::string compressed_text() const { return render(compressed); }
};

/// Per-pass record of what each length admitted; used by tests to check the
/// overlap and monotonicity invariants from outside.
struct CompressionTrace {
    std::vector<std::vector<Selection>> passes;  // index 0 = longest length
    std::uint64_t first_meta_index = 1;
};

/// Replacing f occurrences of a span costing n_s with a label costing n_m
/// pays off when (1 + f) * n_m + n_s < f * n_s (label occurrences plus the
/// dictionary entry versus the repeated span itself).
bool savings_holds(std::int64_t f, std::int64_t n_s, std::int64_t n_m);

/// One pass of the hierarchical scheme: scans all length-`length` windows
/// (skipping any whose words contain a meta pattern), groups byte-identical
/// rendered spans, keeps groups with frequency >= f_min ordered by frequency
/// descending (ties: longer rendered span first, then earlier first
/// occurrence), greedily takes leftmost non-overlapping positions against a
/// shared used-position set, and admits a candidate when at least f_min
/// positions survive and the savings condition holds. `next_index` advances
/// once per admission.
std::vector<Selection> find_subsequences_at_length(const WordSequence& seq, std::size_t length,
                                                   std::size_t f_min, std::uint64_t& next_index,
                                                   const CostModel& model);

/// Substitutes each selection's meta label at its positions. The separator
/// following an emitted label is the one that followed the replaced span's
/// last word. Selections must be pairwise non-overlapping (std::logic_error
/// otherwise; that is a defect upstream, not a user error).
WordSequence apply_replacements(const WordSequence& seq, const std::vector<Selection>& selections);

/// Hierarchical dictionary-encoding compression: passes from l_max down to
/// l_min, each operating on the previous pass's output. Deterministic:
/// identical input and params give byte-identical output. Words already
/// matching the meta pattern are excluded from candidates and fresh indices
/// start above the largest index found in the input.
CompressionResult compress(std::string_view text, const CompressionParams& params,
                           CompressionTrace* trace = nullptr);

} // namespace tokpack
