#pragma once

// Seeded random inputs for property tests: whitespace-rich strings and
// synthetic log corpora with tunable repetition and meta-pattern words.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tokpack/compress.hpp"
#include "tokpack/cost_model.hpp"

namespace tokpack::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline std::string random_separator(Rng& rng) {
    static const char* kSeparators[] = {" ",  "  ", "\t", "\n", " \n", "\t ",
                                        "\r\n", "\v", "\f", "   ", "\n\n"};
    return kSeparators[pick(rng, 0, std::size(kSeparators) - 1)];
}

inline std::string random_word(Rng& rng) {
    static const char* kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789._:/-=[]";
    std::string w;
    std::size_t len = pick(rng, 1, 10);
    for (std::size_t i = 0; i < len; ++i) w += kAlphabet[pick(rng, 0, 43)];
    return w;
}

inline std::string random_meta_like_word(Rng& rng) {
    switch (pick(rng, 0, 5)) {
        case 0: return "<M" + std::to_string(pick(rng, 0, 30)) + ">";
        case 1: return "<M007>";
        case 2: return "x<M" + std::to_string(pick(rng, 1, 9)) + ">y";
        case 3: return "<M99999999999999999999>";  // index overflows uint64
        case 4: return "<M>";                      // not actually a meta word
        default: return "pre<M" + std::to_string(pick(rng, 1, 20)) + ">";
    }
}

// Whitespace-heavy string, not word-structured; exercises segmentation.
inline std::string random_whitespace_string(Rng& rng) {
    std::string s;
    std::size_t chunks = pick(rng, 0, 30);
    for (std::size_t i = 0; i < chunks; ++i) {
        if (chance(rng, 0.5)) s += random_separator(rng);
        if (chance(rng, 0.8)) s += random_word(rng);
    }
    if (chance(rng, 0.3)) s += random_separator(rng);
    return s;
}

// Synthetic log corpus: a small vocabulary, a few repeated phrases rendered
// with fixed separators (so repeats are byte-identical), random filler, and
// optional meta-pattern words sprinkled in.
inline std::string random_corpus(Rng& rng, std::size_t min_words = 20,
                                 std::size_t max_words = 200) {
    std::vector<std::string> vocab;
    std::size_t vocab_size = pick(rng, 4, 25);
    for (std::size_t i = 0; i < vocab_size; ++i) vocab.push_back(random_word(rng));

    std::vector<std::string> phrases;
    std::size_t phrase_count = pick(rng, 1, 5);
    for (std::size_t p = 0; p < phrase_count; ++p) {
        std::size_t len = pick(rng, 2, 10);
        std::string phrase;
        for (std::size_t i = 0; i < len; ++i) {
            if (i > 0) phrase += chance(rng, 0.8) ? " " : random_separator(rng);
            phrase += vocab[pick(rng, 0, vocab.size() - 1)];
        }
        phrases.push_back(phrase);
    }

    const bool with_meta = chance(rng, 0.3);
    std::string text;
    if (chance(rng, 0.25)) text += random_separator(rng);
    std::size_t target = pick(rng, min_words, max_words);
    std::size_t emitted = 0;
    while (emitted < target) {
        if (!text.empty() && !is_separator_char(text.back())) text += random_separator(rng);
        if (chance(rng, 0.55)) {
            const std::string& phrase = phrases[pick(rng, 0, phrases.size() - 1)];
            text += phrase;
            emitted += 1 + static_cast<std::size_t>(
                               std::count_if(phrase.begin(), phrase.end(),
                                             [](char c) { return is_separator_char(c); }));
        } else if (with_meta && chance(rng, 0.15)) {
            text += random_meta_like_word(rng);
            ++emitted;
        } else {
            text += vocab[pick(rng, 0, vocab.size() - 1)];
            ++emitted;
        }
    }
    if (chance(rng, 0.25)) text += random_separator(rng);
    return text;
}

// Random params kept inside the spec's legal ranges.
inline CompressionParams random_params(Rng& rng, const CostModel& model) {
    CompressionParams params;
    params.l_max = pick(rng, 2, 12);
    params.l_min = chance(rng, 0.85) ? 2 : 3;
    if (params.l_max < params.l_min) params.l_max = params.l_min;
    params.f_min = pick(rng, 2, 4);
    params.cost_model = model;
    return params;
}

} // namespace tokpack::testing
