#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tokpack/compress.hpp"
#include "tokpack/cost_model.hpp"
#include "tokpack/log_template.hpp"
#include "tokpack/metrics.hpp"

namespace tokpack {

/// Half-open range of corpus line indices forming one batch.
struct LineRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool oversized = false;  // single line above budget, kept as a singleton

    std::size_t size() const { return end - begin; }
    bool operator==(const LineRange&) const = default;
};

struct BatchPlan {
    std::vector<LineRange> batches;
    std::int64_t budget_tokens = 0;
    std::string cost_model_name;
};

/// Greedy sequential packing: lines accumulate until the next one would
/// push the batch's original-token estimate past the budget (the original
/// is exactly the decompressed output). Never reorders lines. Throws
/// std::invalid_argument when budget_tokens <= 0.
BatchPlan plan_batches(const std::vector<std::string>& lines, std::int64_t budget_tokens,
                       const CostModel& model);

/// Text of one batch: its lines joined with single newlines.
std::string batch_text(const std::vector<std::string>& lines, const LineRange& range);

struct BatchCompression {
    std::size_t batch_id = 0;
    LineRange range;
    CompressionResult result;
    bool failed = false;
    std::string error;
};

/// Compresses every batch independently (its dictionary holds only patterns
/// from that batch). A failing batch is recorded and does not abort the
/// rest. `jobs` bounds worker threads; results come back in batch order.
std::vector<BatchCompression> run_batch_compression(const std::vector<std::string>& lines,
                                                    const CompressionParams& params,
                                                    std::int64_t budget_tokens, int jobs = 1);

/// One (dataset, l_max) configuration of a sweep.
struct SweepRow {
    std::string dataset;
    std::size_t l_max = 0;
    double cr = 0.0;
    double cr_input = 0.0;
    std::size_t dict_entries = 0;
    std::optional<MetricScores> scores;  // present when validation ran
};

/// Runs one compression per l_max in [l_lo, l_hi]. When budget_tokens is
/// set, the batch plan is computed once and held fixed across the sweep;
/// token counts are summed over batches. Zero-token corpora yield no rows.
std::vector<SweepRow> sweep_lmax(const std::vector<std::string>& lines, const std::string& dataset,
                                 std::size_t l_lo, std::size_t l_hi, std::size_t f_min,
                                 const CostModel& model,
                                 std::optional<std::int64_t> budget_tokens = std::nullopt,
                                 int jobs = 1);

/// CSV with header dataset,l_max,cr,cr_input,dict_entries,levenshtein,rouge,bleu.
/// The metric columns stay empty for rows without scores; "rouge" reports
/// ROUGE-1 recall.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// OLS of each similarity metric against cr_input over the sweep rows.
/// Requires >= 3 rows carrying scores (std::invalid_argument otherwise).
struct RegressionReport {
    LinearFit levenshtein;
    LinearFit rouge;
    LinearFit bleu;
};

RegressionReport regression_report(const std::vector<SweepRow>& rows);
std::string regression_json(const RegressionReport& report);

/// File contents split on '\n'. A trailing newline does not create a final
/// empty line; `trailing_newline` records it for byte-exact reassembly.
struct Corpus {
    std::vector<std::string> lines;
    bool trailing_newline = false;
};

Corpus read_corpus(const std::filesystem::path& path);
std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline);

/// LogHub-2k directory convention: <root>/<Name>/<Name>_2k.log plus an
/// optional <Name>_templates.csv with EventId,EventTemplate columns.
/// Template labels are assigned <M1>.. in row order.
struct LogHubDataset {
    std::string name;
    Corpus corpus;
    std::vector<LogTemplate> templates;  // empty when no template file exists
};

LogHubDataset load_loghub_dataset(const std::filesystem::path& root, const std::string& name);

/// Parses EventId,EventTemplate CSV content (quoted fields supported).
std::vector<LogTemplate> parse_loghub_templates_csv(std::string_view content);

} // namespace tokpack
