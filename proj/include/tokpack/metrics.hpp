#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tokpack {

/// The nine similarity scores of the evaluation suite, each in [0, 1].
struct MetricScores {
    double exact_match = 0.0;
    double levenshtein = 0.0;
    double hamming = 0.0;
    double rouge1_recall = 0.0;
    double rouge1_f1 = 0.0;
    double rougeL_recall = 0.0;
    double rougeL_f1 = 0.0;
    double bleu = 0.0;
    double string_presence = 0.0;

    static constexpr std::size_t kCount = 9;
    static const std::array<const char*, kCount>& names();
    double value(std::size_t i) const;
    void set_value(std::size_t i, double v);

    bool operator==(const MetricScores&) const = default;
};

enum class DispersionMode { none, sem, std_dev };

/// Scores plus sample bookkeeping; dispersion is the standard error of the
/// mean (per-log experiments) or the sample standard deviation (per-batch
/// sweeps), zero when n == 1.
struct MetricReport {
    MetricScores scores;
    std::size_t n = 1;
    MetricScores dispersion;
    DispersionMode dispersion_mode = DispersionMode::none;
};

/// 1 - editdistance/max(len); 1.0 when both strings are empty.
double levenshtein_similarity(std::string_view a, std::string_view b);

/// Matching positions below min(len) divided by max(len); 1.0 when both empty.
double hamming_similarity(std::string_view a, std::string_view b);

struct RougeScore {
    double recall = 0.0;
    double f1 = 0.0;
};

/// Clipped unigram overlap over word units.
RougeScore rouge1(std::string_view candidate, std::string_view reference);

/// Longest common subsequence over word units.
RougeScore rougeL(std::string_view candidate, std::string_view reference);

/// Geometric mean of modified n-gram precisions (n = 1..4, capped at the
/// candidate's word count) with brevity penalty and additive-epsilon
/// smoothing of zero counts. 0.0 for an empty candidate against a non-empty
/// reference; 1.0 when both are empty.
double bleu(std::string_view candidate, std::string_view reference);

int exact_match(std::string_view a, std::string_view b);

/// Fraction of expected substrings occurring in `output`; 1.0 when the
/// expected list is empty.
double string_presence(const std::vector<std::string>& expected, std::string_view output);

/// Scores candidate against reference. The expected-substring list for
/// string_presence defaults to the reference's non-empty lines, so a perfect
/// reconstruction scores 1.0 everywhere.
MetricScores score_pair(std::string_view candidate, std::string_view reference);
MetricScores score_pair(std::string_view candidate, std::string_view reference,
                        const std::vector<std::string>& expected);

/// Mean of each score with SEM or sample-std dispersion (n-1 denominator).
/// Throws std::domain_error on an empty list.
MetricReport aggregate(const std::vector<MetricScores>& items, DispersionMode mode);

/// CSV report: one row per item plus an aggregate row, fixed column names.
std::string metrics_csv(const std::vector<MetricScores>& items, const MetricReport& aggregate);

/// Eq-style compression ratios: cr charges only the compressed text,
/// cr_input additionally charges the dictionary. cr_input <= cr always.
struct RatioReport {
    double cr = 0.0;
    double cr_input = 0.0;
    std::int64_t original_tokens = 0;
    std::int64_t compressed_tokens = 0;
    std::int64_t dictionary_tokens = 0;
};

/// Throws std::domain_error when original_tokens == 0.
RatioReport compression_ratio(std::int64_t original_tokens, std::int64_t compressed_tokens,
                              std::int64_t dictionary_tokens);

/// Ordinary least squares of y on x. `defined` is false when x has no
/// variance; a flat y gives slope 0 and r2 0.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool defined = true;
};

LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

} // namespace tokpack
