#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tokpack/batch.hpp"
#include "tokpack/compress.hpp"
#include "tokpack/dictionary.hpp"
#include "tokpack/log_template.hpp"
#include "tokpack/metrics.hpp"

namespace tokpack {

struct RetryPolicy {
    int max_attempts = 3;       // total tries, including the first
    int initial_backoff_ms = 250;  // doubles per retry
};

struct LlmClientConfig {
    std::string endpoint;            // e.g. https://api.example.com/v1/chat/completions
    std::string model;
    std::string auth_env = "TOKPACK_API_KEY";  // name of the env var holding the token
    std::int64_t max_output_tokens = 4096;
    int timeout_sec = 120;
    RetryPolicy retry;
    /// Request body with {system}, {user}, {model}, {max_tokens} placeholders;
    /// string placeholders are substituted JSON-escaped.
    std::string request_template;  // empty = built-in chat-completions shape
    /// JSON pointer to the response text in the reply body.
    std::string response_text_pointer = "/choices/0/message/content";

    void validate() const;  // throws std::invalid_argument
};

/// One decompression request. Transport implementations must send only
/// `system` and `user`; `dictionary_json` mirrors the dictionary for
/// offline/mock clients that decode locally.
struct ChatRequest {
    std::string system;
    std::string user;
    std::string dictionary_json;
};

struct ChatResult {
    bool ok = false;
    std::string text;
    std::string error;
    int attempts = 0;
};

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual ChatResult complete(const ChatRequest& request) = 0;
};

/// HTTP transport with bounded retries (connection errors, 429, 5xx) and an
/// identical body on every attempt.
class HttpLlmClient : public LlmClient {
public:
    explicit HttpLlmClient(LlmClientConfig config);
    ChatResult complete(const ChatRequest& request) override;

    /// The exact body that would be sent; exposed for tests.
    std::string render_body(const ChatRequest& request) const;

private:
    LlmClientConfig config_;
};

enum class ValidationMode { algorithmic, template_mode };

/// Ideal decoder: applies the local decompression oracle to the payload.
/// Algorithmic mode resolves meta labels through the dictionary; template
/// mode decodes line by line (lines that resist decoding pass through).
class OracleClient : public LlmClient {
public:
    explicit OracleClient(ValidationMode mode) : mode_(mode) {}
    ChatResult complete(const ChatRequest& request) override;

private:
    ValidationMode mode_;
};

/// Listing-style decoder prompt: fixed instruction template with the
/// dictionary substituted as one `label: value` line per entry in
/// label-index order.
std::string build_system_prompt(const Dictionary& dict);

struct ValidationRun {
    std::size_t batch_id = 0;
    std::string status;  // ok | transport_error | oversized | empty_response
    std::string system_prompt;
    std::string payload;   // compressed text, sent byte-exact
    std::string response;
    std::string original;
    std::optional<MetricScores> scores;
    std::optional<MetricScores> scores_normalized;  // set when newline trimming is on
    std::int64_t original_tokens = 0;
    std::int64_t compressed_tokens = 0;
    std::int64_t dictionary_tokens = 0;
    double seconds = 0.0;
    int attempts = 0;
};

/// Sends one compressed batch through the client and scores the response
/// against the original. Transport failures after retries are recorded as a
/// failed run; they never throw.
ValidationRun validate_batch(LlmClient& client, const std::string& compressed,
                             const Dictionary& dict, const std::string& original,
                             const CostModel& model);

struct ExperimentConfig {
    CompressionParams params;
    std::int64_t budget_tokens = 4096;
    ValidationMode mode = ValidationMode::algorithmic;
    std::vector<LogTemplate> templates;  // required in template mode
    int jobs = 1;
    /// Strip one leading and one trailing newline from responses and report
    /// those scores alongside the raw ones.
    bool normalize_newline = false;
};

struct ExperimentResult {
    std::vector<ValidationRun> runs;
    /// Per-item scores: one per batch (algorithmic) or one per line
    /// (template mode); failed batches contribute nothing.
    std::vector<MetricScores> per_item;
    MetricReport aggregate;  // std over batches, or SEM over lines
    std::optional<MetricReport> aggregate_normalized;
    TemplateStats template_stats;  // template mode only
};

/// Compresses the corpus in budget-sized batches, validates each batch
/// through `client` (nullptr = local oracle), and aggregates. Oversized
/// batches are rejected at planning time; partial failures leave the rest
/// of the experiment running.
ExperimentResult run_validation_experiment(const std::vector<std::string>& lines,
                                           const ExperimentConfig& config, LlmClient* client);

} // namespace tokpack
