#include "tokpack/dictionary.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

#include "tokpack/errors.hpp"
#include "tokpack/meta_token.hpp"

namespace tokpack {

using ordered_json = nlohmann::ordered_json;

void Dictionary::add(std::string label, std::string value) {
    if (!is_meta_word(label))
        throw std::invalid_argument("dictionary label '" + label + "' is not of the form <M#>");
    if (by_label_.count(label))
        throw std::invalid_argument("duplicate dictionary label " + label);
    if (value.empty())
        throw std::invalid_argument("dictionary value for " + label + " is empty");
    if (contains_meta_pattern(value))
        throw std::invalid_argument("dictionary value for " + label + " contains a meta pattern");
    by_label_.emplace(label, entries_.size());
    entries_.push_back(DictionaryEntry{std::move(label), std::move(value)});
}

const std::string* Dictionary::find(std::string_view label) const {
    auto it = by_label_.find(std::string(label));
    if (it == by_label_.end()) return nullptr;
    return &entries_[it->second].value;
}

std::string decompress(std::string_view compressed_text, const Dictionary& dict) {
    std::string out;
    out.reserve(compressed_text.size());
    std::size_t pos = 0;
    while (auto m = find_meta_pattern(compressed_text, pos)) {
        out.append(compressed_text.substr(pos, m->begin - pos));
        if (const std::string* value = dict.find(m->label)) {
            out.append(*value);
        } else if (m->index && *m->index >= dict.first_index()) {
            throw UnresolvedLabelError(std::string(m->label));
        } else {
            // Original content that happens to look like a label.
            out.append(m->label);
        }
        pos = m->end;
    }
    out.append(compressed_text.substr(pos));
    return out;
}

namespace {

ordered_json params_to_json(const DictionaryParams& p) {
    ordered_json j;
    j["l_max"] = p.l_max;
    j["l_min"] = p.l_min;
    j["f_min"] = p.f_min;
    j["meta_index_start"] = p.meta_index_start;
    return j;
}

ordered_json dictionary_to_json(const Dictionary& dict) {
    ordered_json j;
    j["params"] = params_to_json(dict.params());
    j["cost_model"] = dict.cost_model_name();
    ordered_json entries = ordered_json::object();
    for (const auto& e : dict.entries()) entries[e.label] = e.value;
    j["entries"] = std::move(entries);
    return j;
}

DictionaryParams params_from_json(const ordered_json& j) {
    DictionaryParams p;
    if (j.contains("l_max")) p.l_max = j.at("l_max").get<std::size_t>();
    if (j.contains("l_min")) p.l_min = j.at("l_min").get<std::size_t>();
    if (j.contains("f_min")) p.f_min = j.at("f_min").get<std::size_t>();
    if (j.contains("meta_index_start"))
        p.meta_index_start = j.at("meta_index_start").get<std::uint64_t>();
    return p;
}

// nlohmann collapses duplicate object keys, so they are counted during the
// parse callback and compared against the final object sizes.
ordered_json parse_json_counting_keys(std::string_view bytes, std::size_t& key_events) {
    std::size_t events = 0;
    ordered_json::parser_callback_t cb = [&events](int, ordered_json::parse_event_t event,
                                                   ordered_json&) {
        if (event == ordered_json::parse_event_t::key) ++events;
        return true;
    };
    ordered_json j;
    try {
        j = ordered_json::parse(bytes, cb);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError(std::string("dictionary parse: ") + e.what());
    }
    key_events = events;
    return j;
}

std::size_t count_keys(const ordered_json& j) {
    std::size_t n = 0;
    if (j.is_object()) {
        n += j.size();
        for (const auto& [k, v] : j.items()) n += count_keys(v);
    } else if (j.is_array()) {
        for (const auto& v : j) n += count_keys(v);
    }
    return n;
}

Dictionary dictionary_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ParseError("dictionary parse: root is not an object");
    DictionaryParams params;
    if (j.contains("params")) params = params_from_json(j.at("params"));
    std::string cost_model = j.value("cost_model", std::string("word-unit"));
    Dictionary dict(params, std::move(cost_model));
    if (!j.contains("entries") || !j.at("entries").is_object())
        throw ParseError("dictionary parse: missing \"entries\" object");
    for (const auto& [label, value] : j.at("entries").items()) {
        if (!value.is_string())
            throw ParseError("dictionary parse: value for " + label + " is not a string");
        try {
            dict.add(label, value.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("dictionary parse: ") + e.what());
        }
    }
    return dict;
}

} // namespace

std::string serialize(const Dictionary& dict) {
    return dictionary_to_json(dict).dump(2) + "\n";
}

Dictionary parse_dictionary(std::string_view bytes) {
    std::size_t key_events = 0;
    ordered_json j = parse_json_counting_keys(bytes, key_events);
    if (key_events != count_keys(j))
        throw ParseError("dictionary parse: duplicate object key");
    return dictionary_from_json(j);
}

std::string serialize_envelope(const Dictionary& dict, std::string_view compressed_text) {
    ordered_json j;
    j["dictionary"] = dictionary_to_json(dict);
    j["compressed"] = std::string(compressed_text);
    return j.dump(2) + "\n";
}

Envelope parse_envelope(std::string_view bytes) {
    std::size_t key_events = 0;
    ordered_json j = parse_json_counting_keys(bytes, key_events);
    if (key_events != count_keys(j))
        throw ParseError("envelope parse: duplicate object key");
    if (!j.is_object() || !j.contains("dictionary") || !j.contains("compressed"))
        throw ParseError("envelope parse: expected {\"dictionary\": ..., \"compressed\": ...}");
    if (!j.at("compressed").is_string())
        throw ParseError("envelope parse: \"compressed\" is not a string");
    Envelope env;
    env.dictionary = dictionary_from_json(j.at("dictionary"));
    env.compressed = j.at("compressed").get<std::string>();
    return env;
}

} // namespace tokpack
