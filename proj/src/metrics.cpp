#include "tokpack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "tokpack/segment.hpp"

namespace tokpack {

const std::array<const char*, MetricScores::kCount>& MetricScores::names() {
    static const std::array<const char*, kCount> kNames = {
        "exact_match", "levenshtein",   "hamming", "rouge1_recall",  "rouge1_f1",
        "rougeL_recall", "rougeL_f1",   "bleu",    "string_presence"};
    return kNames;
}

double MetricScores::value(std::size_t i) const {
    switch (i) {
        case 0: return exact_match;
        case 1: return levenshtein;
        case 2: return hamming;
        case 3: return rouge1_recall;
        case 4: return rouge1_f1;
        case 5: return rougeL_recall;
        case 6: return rougeL_f1;
        case 7: return bleu;
        case 8: return string_presence;
    }
    throw std::out_of_range("MetricScores::value");
}

void MetricScores::set_value(std::size_t i, double v) {
    switch (i) {
        case 0: exact_match = v; return;
        case 1: levenshtein = v; return;
        case 2: hamming = v; return;
        case 3: rouge1_recall = v; return;
        case 4: rouge1_f1 = v; return;
        case 5: rougeL_recall = v; return;
        case 6: rougeL_f1 = v; return;
        case 7: bleu = v; return;
        case 8: string_presence = v; return;
    }
    throw std::out_of_range("MetricScores::set_value");
}

namespace {

// Strips the common prefix and suffix before the O(nm) core; edits cost the
// same either way and near-identical inputs become cheap.
void trim_common(std::string_view& a, std::string_view& b) {
    std::size_t prefix = 0;
    std::size_t max_prefix = std::min(a.size(), b.size());
    while (prefix < max_prefix && a[prefix] == b[prefix]) ++prefix;
    a.remove_prefix(prefix);
    b.remove_prefix(prefix);
    std::size_t suffix = 0;
    std::size_t max_suffix = std::min(a.size(), b.size());
    while (suffix < max_suffix && a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) ++suffix;
    a.remove_suffix(suffix);
    b.remove_suffix(suffix);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    trim_common(a, b);
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    if (a.size() < b.size()) std::swap(a, b);

    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t corner = row[0];
        row[0] = i + 1;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t up = row[j + 1];
            if (a[i] == b[j]) {
                row[j + 1] = corner;
            } else {
                row[j + 1] = 1 + std::min({corner, up, row[j]});
            }
            corner = up;
        }
    }
    return row[b.size()];
}

std::vector<std::string> words_of(std::string_view text) {
    return segment(text).words;
}

// n-gram occurrence counts keyed by the n words joined with '\x1f'.
std::unordered_map<std::string, std::size_t> ngram_counts(const std::vector<std::string>& words,
                                                          std::size_t n) {
    std::unordered_map<std::string, std::size_t> counts;
    if (words.size() < n) return counts;
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
        std::string key = words[i];
        for (std::size_t k = 1; k < n; ++k) {
            key += '\x1f';
            key += words[i + k];
        }
        ++counts[key];
    }
    return counts;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    const auto& shorter = a.size() <= b.size() ? a : b;
    const auto& longer = a.size() <= b.size() ? b : a;
    std::vector<std::size_t> row(shorter.size() + 1, 0);
    for (std::size_t i = 0; i < longer.size(); ++i) {
        std::size_t corner = 0;
        for (std::size_t j = 0; j < shorter.size(); ++j) {
            std::size_t up = row[j + 1];
            row[j + 1] = longer[i] == shorter[j] ? corner + 1 : std::max(up, row[j]);
            corner = up;
        }
    }
    return row[shorter.size()];
}

RougeScore rouge_from_overlap(double overlap, std::size_t cand_words, std::size_t ref_words) {
    if (cand_words == 0 && ref_words == 0) return {1.0, 1.0};
    if (cand_words == 0 || ref_words == 0) return {0.0, 0.0};
    double recall = overlap / static_cast<double>(ref_words);
    double precision = overlap / static_cast<double>(cand_words);
    double f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    return {recall, f1};
}

} // namespace

double levenshtein_similarity(std::string_view a, std::string_view b) {
    std::size_t max_len = std::max(a.size(), b.size());
    if (max_len == 0) return 1.0;
    return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(max_len);
}

double hamming_similarity(std::string_view a, std::string_view b) {
    std::size_t max_len = std::max(a.size(), b.size());
    if (max_len == 0) return 1.0;
    std::size_t min_len = std::min(a.size(), b.size());
    std::size_t matches = 0;
    for (std::size_t i = 0; i < min_len; ++i)
        if (a[i] == b[i]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(max_len);
}

RougeScore rouge1(std::string_view candidate, std::string_view reference) {
    auto cand = words_of(candidate);
    auto ref = words_of(reference);
    auto cand_counts = ngram_counts(cand, 1);
    auto ref_counts = ngram_counts(ref, 1);
    std::size_t overlap = 0;
    for (const auto& [word, count] : cand_counts) {
        auto it = ref_counts.find(word);
        if (it != ref_counts.end()) overlap += std::min(count, it->second);
    }
    return rouge_from_overlap(static_cast<double>(overlap), cand.size(), ref.size());
}

RougeScore rougeL(std::string_view candidate, std::string_view reference) {
    auto cand = words_of(candidate);
    auto ref = words_of(reference);
    std::size_t lcs = lcs_length(cand, ref);
    return rouge_from_overlap(static_cast<double>(lcs), cand.size(), ref.size());
}

double bleu(std::string_view candidate, std::string_view reference) {
    constexpr double kEpsilon = 1e-9;
    auto cand = words_of(candidate);
    auto ref = words_of(reference);
    if (cand.empty() && ref.empty()) return 1.0;
    if (cand.empty() || ref.empty()) return 0.0;

    std::size_t max_order = std::min<std::size_t>(4, cand.size());
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= max_order; ++n) {
        auto cand_counts = ngram_counts(cand, n);
        auto ref_counts = ngram_counts(ref, n);
        std::size_t matched = 0;
        std::size_t total = 0;
        for (const auto& [gram, count] : cand_counts) {
            total += count;
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) matched += std::min(count, it->second);
        }
        double numerator = matched > 0 ? static_cast<double>(matched) : kEpsilon;
        log_sum += std::log(numerator / static_cast<double>(total));
    }
    double geo_mean = std::exp(log_sum / static_cast<double>(max_order));

    double brevity = 1.0;
    if (cand.size() < ref.size())
        brevity = std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
    return brevity * geo_mean;
}

int exact_match(std::string_view a, std::string_view b) { return a == b ? 1 : 0; }

double string_presence(const std::vector<std::string>& expected, std::string_view output) {
    if (expected.empty()) return 1.0;
    std::size_t found = 0;
    for (const auto& s : expected)
        if (output.find(s) != std::string_view::npos) ++found;
    return static_cast<double>(found) / static_cast<double>(expected.size());
}

namespace {

std::vector<std::string> nonempty_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                              : text.substr(pos, eol - pos);
        if (!line.empty()) lines.emplace_back(line);
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return lines;
}

} // namespace

MetricScores score_pair(std::string_view candidate, std::string_view reference) {
    return score_pair(candidate, reference, nonempty_lines(reference));
}

MetricScores score_pair(std::string_view candidate, std::string_view reference,
                        const std::vector<std::string>& expected) {
    MetricScores s;
    s.exact_match = exact_match(candidate, reference);
    s.levenshtein = levenshtein_similarity(candidate, reference);
    s.hamming = hamming_similarity(candidate, reference);
    RougeScore r1 = rouge1(candidate, reference);
    s.rouge1_recall = r1.recall;
    s.rouge1_f1 = r1.f1;
    RougeScore rl = rougeL(candidate, reference);
    s.rougeL_recall = rl.recall;
    s.rougeL_f1 = rl.f1;
    s.bleu = bleu(candidate, reference);
    s.string_presence = string_presence(expected, candidate);
    return s;
}

MetricReport aggregate(const std::vector<MetricScores>& items, DispersionMode mode) {
    if (items.empty()) throw std::domain_error("aggregate: empty sample");
    MetricReport report;
    report.n = items.size();
    report.dispersion_mode = mode;
    const double n = static_cast<double>(items.size());
    for (std::size_t i = 0; i < MetricScores::kCount; ++i) {
        double sum = 0.0;
        for (const auto& item : items) sum += item.value(i);
        double mean = sum / n;
        report.scores.set_value(i, mean);
        double spread = 0.0;
        if (items.size() > 1) {
            double ss = 0.0;
            for (const auto& item : items) {
                double d = item.value(i) - mean;
                ss += d * d;
            }
            double sample_std = std::sqrt(ss / (n - 1.0));
            spread = mode == DispersionMode::sem ? sample_std / std::sqrt(n) : sample_std;
        }
        report.dispersion.set_value(i, spread);
    }
    return report;
}

std::string metrics_csv(const std::vector<MetricScores>& items, const MetricReport& aggregate) {
    std::string out = "item";
    for (const char* name : MetricScores::names()) {
        out += ',';
        out += name;
    }
    out += '\n';
    char buf[32];
    auto append_scores = [&](const MetricScores& s) {
        for (std::size_t i = 0; i < MetricScores::kCount; ++i) {
            std::snprintf(buf, sizeof(buf), ",%.6f", s.value(i));
            out += buf;
        }
        out += '\n';
    };
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += std::to_string(i);
        append_scores(items[i]);
    }
    out += "aggregate";
    append_scores(aggregate.scores);
    return out;
}

RatioReport compression_ratio(std::int64_t original_tokens, std::int64_t compressed_tokens,
                              std::int64_t dictionary_tokens) {
    if (original_tokens == 0) throw std::domain_error("compression_ratio: zero original tokens");
    RatioReport r;
    r.original_tokens = original_tokens;
    r.compressed_tokens = compressed_tokens;
    r.dictionary_tokens = dictionary_tokens;
    const double original = static_cast<double>(original_tokens);
    r.cr = 1.0 - static_cast<double>(compressed_tokens) / original;
    r.cr_input = 1.0 - static_cast<double>(compressed_tokens + dictionary_tokens) / original;
    return r;
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
    LinearFit fit;
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) {
        fit.defined = false;
        return fit;
    }
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mean_x;
        double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) {
        fit.defined = false;
        return fit;
    }
    if (syy == 0.0) {
        fit.slope = 0.0;
        fit.intercept = mean_y;
        fit.r2 = 0.0;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.r2 = (sxy * sxy) / (sxx * syy);
    return fit;
}

} // namespace tokpack
