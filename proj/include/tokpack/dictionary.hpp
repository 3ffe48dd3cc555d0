#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tokpack {

/// Provenance of a compression run, carried alongside the entries.
/// meta_index_start is the first index this run was allowed to assign;
/// meta patterns below it in a compressed text are original content and
/// pass through decompression untouched.
struct DictionaryParams {
    std::size_t l_max = 10;
    std::size_t l_min = 2;
    std::size_t f_min = 2;
    std::uint64_t meta_index_start = 1;

    bool operator==(const DictionaryParams&) const = default;
};

struct DictionaryEntry {
    std::string label;
    std::string value;

    bool operator==(const DictionaryEntry&) const = default;
};

/// Ordered map from meta label to original span text. Entries are kept in
/// admission order, which is also label-index order. Immutable by
/// convention once a compression run has produced it.
class Dictionary {
public:
    Dictionary() = default;
    Dictionary(DictionaryParams params, std::string cost_model_name)
        : params_(params), cost_model_name_(std::move(cost_model_name)) {}

    /// Validates and appends an entry. Throws std::invalid_argument when the
    /// label is malformed or duplicated, the value is empty, or the value
    /// contains a meta pattern.
    void add(std::string label, std::string value);

    const std::string* find(std::string_view label) const;

    const std::vector<DictionaryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const DictionaryParams& params() const { return params_; }
    const std::string& cost_model_name() const { return cost_model_name_; }

    /// First meta index owned by this dictionary's run.
    std::uint64_t first_index() const { return params_.meta_index_start; }

    bool operator==(const Dictionary& other) const {
        return entries_ == other.entries_ && params_ == other.params_ &&
               cost_model_name_ == other.cost_model_name_;
    }

private:
    std::vector<DictionaryEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_label_;
    DictionaryParams params_;
    std::string cost_model_name_ = "word-unit";
};

/// Replaces every dictionary-label occurrence with its value in one left to
/// right pass; substituted values are never re-scanned. Meta patterns below
/// the dictionary's first index (or with an unparseable index) are original
/// content and are preserved byte-exact. A pattern at or above the first
/// index with no entry throws UnresolvedLabelError.
std::string decompress(std::string_view compressed_text, const Dictionary& dict);

/// JSON form: {"params": {...}, "cost_model": "...", "entries": {...}},
/// entries in label-index order. parse(serialize(d)) == d.
std::string serialize(const Dictionary& dict);

/// Throws ParseError on malformed JSON, duplicate labels, or invariant
/// violations (bad label, empty value, meta pattern inside a value).
Dictionary parse_dictionary(std::string_view bytes);

/// Single-file envelope pairing a dictionary with its compressed text:
/// {"dictionary": {...}, "compressed": "..."}.
std::string serialize_envelope(const Dictionary& dict, std::string_view compressed_text);

struct Envelope {
    Dictionary dictionary;
    std::string compressed;
};

Envelope parse_envelope(std::string_view bytes);

} // namespace tokpack
