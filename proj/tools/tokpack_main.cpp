// tokpack: dictionary-encoding compressor and evaluation toolkit for
// repetitive text destined for LLM analysis.
//
// Subcommands: compress, decompress, sweep, score, validate.
// JSON goes to stdout, human messages to stderr.
// Exit codes: 0 success, 2 usage/config/IO error, 3 reconstruction
// integrity failure (unresolved meta label, broken template record).

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tokpack/batch.hpp"
#include "tokpack/compress.hpp"
#include "tokpack/dictionary.hpp"
#include "tokpack/errors.hpp"
#include "tokpack/log_template.hpp"
#include "tokpack/metrics.hpp"
#include "tokpack/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIntegrity = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

// Shared compression flags.
struct ParamFlags {
    std::size_t l_max = 10;
    std::size_t l_min = 2;
    std::size_t f_min = 2;
    std::string cost_model = "word";

    void attach(CLI::App& cmd) {
        cmd.add_option("--l-max", l_max, "Maximum subsequence word length");
        cmd.add_option("--l-min", l_min, "Minimum subsequence word length");
        cmd.add_option("--f-min", f_min, "Minimum occurrence count");
        cmd.add_option("--cost-model", cost_model,
                       "Token cost model: word, char, or external:<path>");
    }

    tokpack::CompressionParams params() const {
        tokpack::CompressionParams p;
        p.l_max = l_max;
        p.l_min = l_min;
        p.f_min = f_min;
        p.cost_model = tokpack::CostModel::from_spec(cost_model);
        return p;
    }
};

ordered_json scores_json(const tokpack::MetricScores& s) {
    ordered_json j;
    for (std::size_t i = 0; i < tokpack::MetricScores::kCount; ++i)
        j[tokpack::MetricScores::names()[i]] = s.value(i);
    return j;
}

ordered_json report_json(const tokpack::MetricReport& report) {
    ordered_json j;
    j["n"] = report.n;
    switch (report.dispersion_mode) {
        case tokpack::DispersionMode::none: j["dispersion_mode"] = "none"; break;
        case tokpack::DispersionMode::sem: j["dispersion_mode"] = "sem"; break;
        case tokpack::DispersionMode::std_dev: j["dispersion_mode"] = "std"; break;
    }
    j["scores"] = scores_json(report.scores);
    if (report.n > 1) j["dispersion"] = scores_json(report.dispersion);
    return j;
}

ordered_json ratio_json(const tokpack::CompressionResult& result, double cr, double cr_input) {
    ordered_json j;
    j["original_tokens"] = result.original_tokens;
    j["compressed_tokens"] = result.compressed_tokens;
    j["dictionary_tokens"] = result.dictionary_tokens;
    j["dict_entries"] = result.dictionary.size();
    j["cr"] = cr;
    j["cr_input"] = cr_input;
    return j;
}

// ---------------------------------------------------------------- compress

struct CompressArgs {
    std::string input;
    std::string output;
    bool split = false;
    ParamFlags flags;
};

int cmd_compress(const CompressArgs& args) {
    std::string text = read_file(args.input);
    tokpack::CompressionParams params = args.flags.params();

    std::uint64_t reserved = tokpack::max_meta_index(text);
    if (reserved > 0)
        std::cerr << "note: input contains reserved meta-pattern words; fresh labels start at <M"
                  << (reserved + 1) << ">\n";

    tokpack::CompressionResult result = tokpack::compress(text, params);
    std::string compressed = result.compressed_text();

    if (args.split) {
        write_file(args.output + ".cmp", compressed);
        write_file(args.output + ".dict", tokpack::serialize(result.dictionary));
    } else {
        write_file(args.output, tokpack::serialize_envelope(result.dictionary, compressed));
    }

    double cr = 0.0, cr_input = 0.0;
    if (result.original_tokens > 0) {
        tokpack::RatioReport ratio = tokpack::compression_ratio(
            result.original_tokens, result.compressed_tokens, result.dictionary_tokens);
        cr = ratio.cr;
        cr_input = ratio.cr_input;
    } else {
        std::cerr << "note: input has zero tokens under " << params.cost_model.name()
                  << "; ratios reported as 0\n";
    }
    std::cout << ratio_json(result, cr, cr_input).dump(2) << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- decompress

struct DecompressArgs {
    std::string input;
    std::string dict_path;
    std::string output;
};

int cmd_decompress(const DecompressArgs& args) {
    std::string compressed;
    tokpack::Dictionary dict;
    if (args.dict_path.empty()) {
        tokpack::Envelope env = tokpack::parse_envelope(read_file(args.input));
        compressed = std::move(env.compressed);
        dict = std::move(env.dictionary);
    } else {
        compressed = read_file(args.input);
        dict = tokpack::parse_dictionary(read_file(args.dict_path));
    }
    std::string restored = tokpack::decompress(compressed, dict);
    write_file(args.output, restored);
    ordered_json j;
    j["bytes"] = restored.size();
    j["dict_entries"] = dict.size();
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string input;
    std::string output;
    std::string dataset;
    ParamFlags flags{.l_max = 10, .l_min = 3};
    std::optional<std::int64_t> budget;
    int jobs = 1;
    bool validate = false;
    bool mock_oracle = false;
    std::string regression_out;
};

tokpack::LlmClientConfig client_config_from_env();

int cmd_sweep(const SweepArgs& args) {
    tokpack::Corpus corpus = tokpack::read_corpus(args.input);
    tokpack::CostModel model = tokpack::CostModel::from_spec(args.flags.cost_model);
    std::string dataset = args.dataset.empty() ? fs::path(args.input).stem().string()
                                               : args.dataset;
    if (args.flags.l_min < 2 || args.flags.l_max < args.flags.l_min)
        throw std::invalid_argument("sweep: need 2 <= --l-min <= --l-max");

    std::vector<tokpack::SweepRow> rows =
        tokpack::sweep_lmax(corpus.lines, dataset, args.flags.l_min, args.flags.l_max,
                            args.flags.f_min, model, args.budget, args.jobs);

    if (args.validate) {
        std::unique_ptr<tokpack::LlmClient> client;
        if (!args.mock_oracle) {
            tokpack::LlmClientConfig config = client_config_from_env();
            client = std::make_unique<tokpack::HttpLlmClient>(config);
        }
        for (auto& row : rows) {
            tokpack::ExperimentConfig config;
            config.params.l_max = row.l_max;
            config.params.l_min = 2;
            config.params.f_min = args.flags.f_min;
            config.params.cost_model = model;
            config.budget_tokens = args.budget.value_or(4096);
            config.jobs = args.jobs;
            tokpack::ExperimentResult result =
                tokpack::run_validation_experiment(corpus.lines, config, client.get());
            if (!result.per_item.empty()) row.scores = result.aggregate.scores;
        }
    }

    write_file(args.output, tokpack::sweep_csv(rows));
    std::cerr << "wrote " << rows.size() << " sweep row(s) to " << args.output << "\n";

    if (!args.regression_out.empty()) {
        std::size_t scored = 0;
        for (const auto& row : rows)
            if (row.scores) ++scored;
        if (scored < 3) {
            std::cerr << "note: regression needs >= 3 scored rows (have " << scored
                      << "); skipping " << args.regression_out << "\n";
        } else {
            tokpack::RegressionReport report = tokpack::regression_report(rows);
            write_file(args.regression_out, tokpack::regression_json(report));
        }
    }
    return kExitOk;
}

// ------------------------------------------------------------------- score

int cmd_score(const std::string& original_path, const std::string& candidate_path) {
    std::string original = read_file(original_path);
    std::string candidate = read_file(candidate_path);
    tokpack::MetricScores scores = tokpack::score_pair(candidate, original);
    tokpack::MetricReport report;
    report.scores = scores;
    report.n = 1;
    std::cout << report_json(report).dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::string input;
    std::string mode = "algorithmic";
    std::string templates_path;
    bool mock_oracle = false;
    std::optional<std::int64_t> budget;
    int jobs = 1;
    std::string out_dir;
    bool normalize_newline = false;
    ParamFlags flags;
    // transport
    std::string endpoint;
    std::string model_id;
    std::string auth_env;
    std::int64_t max_output_tokens = 4096;
    int timeout_sec = 120;
    int retries = 3;
    int backoff_ms = 250;
    std::string request_template_path;
    std::string response_path = "/choices/0/message/content";
};

const ValidateArgs* g_validate_args = nullptr;

tokpack::LlmClientConfig client_config_from_args(const ValidateArgs& args) {
    tokpack::LlmClientConfig config;
    config.endpoint = args.endpoint.empty() ? env_or("TOKPACK_ENDPOINT", "") : args.endpoint;
    config.model = args.model_id.empty() ? env_or("TOKPACK_MODEL", "") : args.model_id;
    config.auth_env = args.auth_env.empty() ? env_or("TOKPACK_AUTH_ENV", "TOKPACK_API_KEY")
                                            : args.auth_env;
    config.max_output_tokens = args.max_output_tokens;
    config.timeout_sec = args.timeout_sec;
    config.retry.max_attempts = args.retries;
    config.retry.initial_backoff_ms = args.backoff_ms;
    if (!args.request_template_path.empty())
        config.request_template = read_file(args.request_template_path);
    config.response_text_pointer = args.response_path;
    return config;
}

tokpack::LlmClientConfig client_config_from_env() {
    ValidateArgs defaults;
    if (g_validate_args) return client_config_from_args(*g_validate_args);
    return client_config_from_args(defaults);
}

ordered_json run_json(const tokpack::ValidationRun& run, bool with_texts) {
    ordered_json j;
    j["batch_id"] = run.batch_id;
    j["status"] = run.status;
    j["attempts"] = run.attempts;
    j["seconds"] = run.seconds;
    j["original_tokens"] = run.original_tokens;
    j["compressed_tokens"] = run.compressed_tokens;
    j["dictionary_tokens"] = run.dictionary_tokens;
    if (run.scores) j["scores"] = scores_json(*run.scores);
    if (run.scores_normalized) j["scores_normalized"] = scores_json(*run.scores_normalized);
    if (with_texts) {
        j["system_prompt"] = run.system_prompt;
        j["payload"] = run.payload;
        j["response"] = run.response;
        j["original"] = run.original;
    }
    return j;
}

int cmd_validate(const ValidateArgs& args) {
    tokpack::Corpus corpus = tokpack::read_corpus(args.input);

    tokpack::ExperimentConfig config;
    config.params = args.flags.params();
    config.jobs = args.jobs;
    config.normalize_newline = args.normalize_newline;
    if (args.mode == "template") {
        config.mode = tokpack::ValidationMode::template_mode;
        if (args.templates_path.empty())
            throw std::invalid_argument("template mode requires --templates <path>");
        config.templates = tokpack::parse_template_file(read_file(args.templates_path));
    } else if (args.mode == "algorithmic") {
        config.mode = tokpack::ValidationMode::algorithmic;
    } else {
        throw std::invalid_argument("--mode must be algorithmic or template");
    }

    std::unique_ptr<tokpack::LlmClient> client;
    if (!args.mock_oracle) {
        tokpack::LlmClientConfig client_config = client_config_from_args(args);
        client = std::make_unique<tokpack::HttpLlmClient>(client_config);
        config.budget_tokens = args.budget.value_or(client_config.max_output_tokens);
        if (config.budget_tokens > client_config.max_output_tokens) {
            throw std::invalid_argument(
                "--budget-tokens exceeds the model's max output tokens; decompressed batches "
                "would truncate");
        }
    } else {
        config.budget_tokens = args.budget.value_or(4096);
    }

    tokpack::ExperimentResult result =
        tokpack::run_validation_experiment(corpus.lines, config, client.get());

    ordered_json summary;
    summary["mode"] = args.mode;
    summary["batches"] = result.runs.size();
    std::size_t failed = 0;
    for (const auto& run : result.runs)
        if (!run.scores) ++failed;
    summary["failed_batches"] = failed;
    if (config.mode == tokpack::ValidationMode::template_mode) {
        summary["lines_total"] = result.template_stats.total_lines;
        summary["lines_matched"] = result.template_stats.matched_lines;
    }
    if (!result.per_item.empty()) {
        summary["aggregate"] = report_json(result.aggregate);
        if (result.aggregate_normalized)
            summary["aggregate_normalized"] = report_json(*result.aggregate_normalized);
    }
    ordered_json runs = ordered_json::array();
    for (const auto& run : result.runs) runs.push_back(run_json(run, false));
    summary["runs"] = runs;

    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        for (const auto& run : result.runs) {
            write_file(fs::path(args.out_dir) / ("batch_" + std::to_string(run.batch_id) + ".json"),
                       run_json(run, true).dump(2) + "\n");
        }
        write_file(fs::path(args.out_dir) / "report.json", summary.dump(2) + "\n");
        if (!result.per_item.empty())
            write_file(fs::path(args.out_dir) / "report.csv",
                       tokpack::metrics_csv(result.per_item, result.aggregate));
    }

    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lossless dictionary-encoding compressor for repetitive text headed to LLMs"};
    app.require_subcommand(1);

    CompressArgs compress_args;
    auto* compress_cmd = app.add_subcommand("compress", "Compress a file with meta-tokens");
    compress_cmd->add_option("input", compress_args.input, "Input file")->required();
    compress_cmd->add_option("-o,--output", compress_args.output, "Output path")->required();
    compress_cmd->add_flag("--split", compress_args.split,
                           "Write <output>.cmp + <output>.dict instead of one envelope");
    compress_args.flags.attach(*compress_cmd);

    DecompressArgs decompress_args;
    auto* decompress_cmd = app.add_subcommand("decompress", "Restore the original text");
    decompress_cmd->add_option("input", decompress_args.input, "Envelope or .cmp file")->required();
    decompress_cmd->add_option("-d,--dict", decompress_args.dict_path,
                               "Dictionary file (for split inputs)");
    decompress_cmd->add_option("-o,--output", decompress_args.output, "Output path")->required();

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Compression ratios across l_max values");
    sweep_cmd->add_option("input", sweep_args.input, "Corpus file (one log per line)")->required();
    sweep_cmd->add_option("-o,--output", sweep_args.output, "CSV output path")->required();
    sweep_cmd->add_option("--dataset", sweep_args.dataset, "Dataset id for the CSV");
    sweep_args.flags.attach(*sweep_cmd);
    std::int64_t sweep_budget = 0;
    sweep_cmd->add_option("--budget-tokens", sweep_budget,
                          "Batch budget; omit to compress the corpus as one batch");
    sweep_cmd->add_option("--jobs", sweep_args.jobs, "Parallel workers");
    sweep_cmd->add_flag("--validate", sweep_args.validate, "Score decompression per l_max");
    sweep_cmd->add_flag("--mock-oracle", sweep_args.mock_oracle,
                        "Use the local ideal decoder instead of an LLM endpoint");
    sweep_cmd->add_option("--regression-out", sweep_args.regression_out,
                          "Write per-metric OLS fits (needs --validate) to this JSON file");

    std::string score_original, score_candidate;
    auto* score_cmd = app.add_subcommand("score", "Similarity metrics between two files");
    score_cmd->add_option("original", score_original, "Reference file")->required();
    score_cmd->add_option("candidate", score_candidate, "Candidate file")->required();

    ValidateArgs validate_args;
    auto* validate_cmd =
        app.add_subcommand("validate", "LLM decompression experiment on a corpus");
    validate_cmd->add_option("input", validate_args.input, "Corpus file")->required();
    validate_cmd->add_option("--mode", validate_args.mode, "algorithmic or template");
    validate_cmd->add_option("--templates", validate_args.templates_path,
                             "Template file (label<TAB>pattern) for template mode");
    validate_cmd->add_flag("--mock-oracle", validate_args.mock_oracle,
                           "Use the local ideal decoder instead of an LLM endpoint");
    std::int64_t validate_budget = 0;
    validate_cmd->add_option("--budget-tokens", validate_budget, "Batch budget in tokens");
    validate_cmd->add_option("--jobs", validate_args.jobs, "Concurrent in-flight requests");
    validate_cmd->add_option("--out", validate_args.out_dir, "Directory for per-batch artifacts");
    validate_cmd->add_flag("--normalize-newline", validate_args.normalize_newline,
                           "Also score with one leading/trailing newline stripped");
    validate_args.flags.attach(*validate_cmd);
    validate_cmd->add_option("--endpoint", validate_args.endpoint,
                             "Chat endpoint URL (default $TOKPACK_ENDPOINT)");
    validate_cmd->add_option("--model", validate_args.model_id,
                             "Model id (default $TOKPACK_MODEL)");
    validate_cmd->add_option("--auth-env", validate_args.auth_env,
                             "Env var holding the API token (default $TOKPACK_AUTH_ENV or "
                             "TOKPACK_API_KEY)");
    validate_cmd->add_option("--max-output-tokens", validate_args.max_output_tokens,
                             "Model output window");
    validate_cmd->add_option("--timeout", validate_args.timeout_sec, "Request timeout, seconds");
    validate_cmd->add_option("--retries", validate_args.retries, "Max attempts per request");
    validate_cmd->add_option("--backoff-ms", validate_args.backoff_ms, "Initial retry backoff");
    validate_cmd->add_option("--request-template", validate_args.request_template_path,
                             "Request body template file with {system}/{user} placeholders");
    validate_cmd->add_option("--response-path", validate_args.response_path,
                             "JSON pointer to the response text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (compress_cmd->parsed()) return cmd_compress(compress_args);
        if (decompress_cmd->parsed()) return cmd_decompress(decompress_args);
        if (sweep_cmd->parsed()) {
            if (sweep_cmd->count("--budget-tokens")) sweep_args.budget = sweep_budget;
            g_validate_args = &validate_args;
            return cmd_sweep(sweep_args);
        }
        if (score_cmd->parsed()) return cmd_score(score_original, score_candidate);
        if (validate_cmd->parsed()) {
            if (validate_cmd->count("--budget-tokens")) validate_args.budget = validate_budget;
            return cmd_validate(validate_args);
        }
    } catch (const tokpack::UnresolvedLabelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const tokpack::ReconstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
