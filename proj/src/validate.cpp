#include "tokpack/validate.hpp"

#ifdef TOKPACK_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <functional>
#include <stdexcept>
#include <thread>

#include "tokpack/errors.hpp"

namespace tokpack {

using json = nlohmann::json;

void LlmClientConfig::validate() const {
    if (endpoint.empty()) throw std::invalid_argument("client config: endpoint is empty");
    if (max_output_tokens <= 0)
        throw std::invalid_argument("client config: max output tokens must be positive");
    if (retry.max_attempts < 1)
        throw std::invalid_argument("client config: retry attempts must be >= 1");
}

namespace {

constexpr std::string_view kDefaultRequestTemplate =
    R"({"model": "{model}", "max_tokens": {max_tokens}, "messages": [)"
    R"({"role": "system", "content": "{system}"}, )"
    R"({"role": "user", "content": "{user}"}]})";

std::string json_escape(std::string_view text) {
    std::string quoted = json(text).dump();  // includes surrounding quotes
    return quoted.substr(1, quoted.size() - 2);
}

void replace_all(std::string& haystack, std::string_view needle, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        haystack.replace(pos, needle.size(), value);
        pos += value.size();
    }
}

struct EndpointParts {
    std::string base;  // scheme://host[:port]
    std::string path;
};

EndpointParts split_endpoint(const std::string& endpoint) {
    std::size_t scheme = endpoint.find("://");
    std::size_t path_start = scheme == std::string::npos ? endpoint.find('/')
                                                         : endpoint.find('/', scheme + 3);
    if (path_start == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

bool status_retryable(int status) { return status == 429 || (status >= 500 && status < 600); }

} // namespace

HttpLlmClient::HttpLlmClient(LlmClientConfig config) : config_(std::move(config)) {
    config_.validate();
}

std::string HttpLlmClient::render_body(const ChatRequest& request) const {
    const std::string& tmpl = config_.request_template.empty()
                                  ? std::string(kDefaultRequestTemplate)
                                  : config_.request_template;
    // One pass over the template only, so substituted content is never
    // rescanned for placeholders.
    const std::pair<std::string_view, std::string> subs[] = {
        {"{max_tokens}", std::to_string(config_.max_output_tokens)},
        {"{model}", json_escape(config_.model)},
        {"{system}", json_escape(request.system)},
        {"{user}", json_escape(request.user)},
    };
    std::string body;
    body.reserve(tmpl.size() + request.system.size() + request.user.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        std::size_t brace = tmpl.find('{', pos);
        if (brace == std::string::npos) break;
        body.append(tmpl, pos, brace - pos);
        pos = brace;
        bool matched = false;
        for (const auto& [name, value] : subs) {
            if (tmpl.compare(pos, name.size(), name) == 0) {
                body += value;
                pos += name.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            body += tmpl[pos];
            ++pos;
        }
    }
    body.append(tmpl, pos, std::string::npos);
    return body;
}

ChatResult HttpLlmClient::complete(const ChatRequest& request) {
    ChatResult result;
    const std::string body = render_body(request);  // identical on every attempt
    EndpointParts parts = split_endpoint(config_.endpoint);

    httplib::Client client(parts.base);
    client.set_connection_timeout(config_.timeout_sec, 0);
    client.set_read_timeout(config_.timeout_sec, 0);
    httplib::Headers headers;
    if (!config_.auth_env.empty()) {
        if (const char* token = std::getenv(config_.auth_env.c_str()); token && *token)
            headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    int backoff_ms = config_.retry.initial_backoff_ms;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        result.attempts = attempt;
        auto res = client.Post(parts.path, headers, body, "application/json");
        if (res && res->status >= 200 && res->status < 300) {
            try {
                json reply = json::parse(res->body);
                json::json_pointer ptr(config_.response_text_pointer);
                if (!reply.contains(ptr) || !reply.at(ptr).is_string()) {
                    result.error = "response has no text at " + config_.response_text_pointer;
                    return result;
                }
                result.text = reply.at(ptr).get<std::string>();
                result.ok = true;
                return result;
            } catch (const json::exception& e) {
                result.error = std::string("bad response body: ") + e.what();
                return result;
            }
        }
        if (res && !status_retryable(res->status)) {
            result.error = "http status " + std::to_string(res->status);
            return result;
        }
        result.error = res ? "http status " + std::to_string(res->status)
                           : "transport error: " + httplib::to_string(res.error());
        if (attempt < config_.retry.max_attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
    }
    return result;
}

ChatResult OracleClient::complete(const ChatRequest& request) {
    ChatResult result;
    result.attempts = 1;
    try {
        Dictionary dict = parse_dictionary(request.dictionary_json);
        if (mode_ == ValidationMode::algorithmic) {
            result.text = decompress(request.user, dict);
        } else {
            std::vector<LogTemplate> templates;
            templates.reserve(dict.size());
            for (const auto& e : dict.entries()) templates.push_back(make_template(e.label, e.value));
            std::string out;
            std::size_t pos = 0;
            const std::string& payload = request.user;
            bool first = true;
            while (pos <= payload.size()) {
                std::size_t eol = payload.find('\n', pos);
                std::string_view line = eol == std::string::npos
                                            ? std::string_view(payload).substr(pos)
                                            : std::string_view(payload).substr(pos, eol - pos);
                if (!first) out += '\n';
                first = false;
                try {
                    out += template_decompress_line(line, templates);
                } catch (const ReconstructionError&) {
                    // Ambiguous framing means the line was never compressed.
                    out += line;
                }
                if (eol == std::string::npos) break;
                pos = eol + 1;
            }
            result.text = out;
        }
        result.ok = true;
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

std::string build_system_prompt(const Dictionary& dict) {
    static constexpr std::string_view kTemplate =
        "You are a PRECISE text decoder. Replace ALL <M###> tokens with EXACT dictionary "
        "values.\n"
        "\n"
        "Dictionary: {dictionary}\n"
        "\n"
        "RULES:\n"
        "1. Find EVERY <M###> token and replace with its EXACT dictionary value\n"
        "2. Copy ALL other text EXACTLY as written\n"
        "3. NEVER modify any content except <M###> tokens\n"
        "4. Output EVERY character from input\n"
        "\n"
        "REPLACE ALL TOKENS. PRESERVE ALL OTHER TEXT.\n";

    std::string block;
    for (const auto& e : dict.entries()) {
        block += '\n';
        block += e.label;
        block += ": ";
        block += e.value;
    }
    std::string prompt(kTemplate);
    replace_all(prompt, "{dictionary}", block);
    return prompt;
}

ValidationRun validate_batch(LlmClient& client, const std::string& compressed,
                             const Dictionary& dict, const std::string& original,
                             const CostModel& model) {
    ValidationRun run;
    run.system_prompt = build_system_prompt(dict);
    run.payload = compressed;
    run.original = original;
    run.original_tokens = model.cost(original);
    run.compressed_tokens = model.cost(compressed);
    std::int64_t dict_tokens = 0;
    for (const auto& e : dict.entries()) dict_tokens += model.cost(e.label) + model.cost(e.value);
    run.dictionary_tokens = dict_tokens;

    ChatRequest request{run.system_prompt, compressed, serialize(dict)};
    auto started = std::chrono::steady_clock::now();
    ChatResult result = client.complete(request);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    run.attempts = result.attempts;

    if (!result.ok) {
        run.status = "transport_error";
        return run;
    }
    run.response = result.text;
    run.status = result.text.empty() && !original.empty() ? "empty_response" : "ok";
    run.scores = score_pair(run.response, original);
    return run;
}

namespace {

MetricScores scores_with_trimmed_response(std::string_view response, const std::string& original) {
    std::string_view trimmed = response;
    if (!trimmed.empty() && trimmed.front() == '\n') trimmed.remove_prefix(1);
    if (!trimmed.empty() && trimmed.back() == '\n') trimmed.remove_suffix(1);
    return score_pair(trimmed, original);
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            lines.emplace_back(text.substr(pos));
            break;
        }
        lines.emplace_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return lines;
}

} // namespace

ExperimentResult run_validation_experiment(const std::vector<std::string>& lines,
                                           const ExperimentConfig& config, LlmClient* client) {
    config.params.validate();
    if (config.mode == ValidationMode::template_mode && config.templates.empty())
        throw std::invalid_argument("template mode requires templates");
    if (config.budget_tokens <= 0) throw std::invalid_argument("budget must be positive");

    ExperimentResult result;
    OracleClient oracle(config.mode);
    LlmClient& effective_client = client ? *client : static_cast<LlmClient&>(oracle);

    const CostModel& model = config.params.cost_model;
    BatchPlan plan = plan_batches(lines, config.budget_tokens, model);

    // Per-batch compressed payload and dictionary.
    std::vector<std::string> payloads(plan.batches.size());
    std::vector<Dictionary> dicts(plan.batches.size());
    std::vector<std::string> originals(plan.batches.size());

    if (config.mode == ValidationMode::algorithmic) {
        for (std::size_t i = 0; i < plan.batches.size(); ++i) {
            originals[i] = batch_text(lines, plan.batches[i]);
            CompressionResult cr = compress(originals[i], config.params);
            payloads[i] = cr.compressed_text();
            dicts[i] = std::move(cr.dictionary);
        }
    } else {
        std::vector<std::string> compressed_lines =
            template_compress_corpus(lines, config.templates, &result.template_stats);
        Dictionary template_dict;
        for (const auto& t : config.templates) template_dict.add(t.id, t.pattern);
        for (std::size_t i = 0; i < plan.batches.size(); ++i) {
            originals[i] = batch_text(lines, plan.batches[i]);
            payloads[i] = batch_text(compressed_lines, plan.batches[i]);
            dicts[i] = template_dict;
        }
    }

    result.runs.resize(plan.batches.size());
    std::vector<std::thread> threads;
    std::atomic<std::size_t> next{0};
    int workers = std::max(1, config.jobs);
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= plan.batches.size()) break;
            if (plan.batches[i].oversized) {
                ValidationRun run;
                run.batch_id = i;
                run.status = "oversized";
                run.original = originals[i];
                run.payload = payloads[i];
                result.runs[i] = std::move(run);
                continue;
            }
            ValidationRun run =
                validate_batch(effective_client, payloads[i], dicts[i], originals[i], model);
            run.batch_id = i;
            if (config.normalize_newline && run.scores)
                run.scores_normalized = scores_with_trimmed_response(run.response, originals[i]);
            result.runs[i] = std::move(run);
        }
    };
    if (workers == 1 || plan.batches.size() <= 1) {
        worker();
    } else {
        for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    // Aggregation: per batch for algorithmic runs, per line for template runs.
    std::vector<MetricScores> normalized_items;
    for (const auto& run : result.runs) {
        if (!run.scores) continue;
        if (config.mode == ValidationMode::algorithmic) {
            result.per_item.push_back(*run.scores);
            if (run.scores_normalized) normalized_items.push_back(*run.scores_normalized);
        } else {
            std::vector<std::string> original_lines = split_lines(run.original);
            std::vector<std::string> response_lines = split_lines(run.response);
            for (std::size_t j = 0; j < original_lines.size(); ++j) {
                std::string_view cand =
                    j < response_lines.size() ? std::string_view(response_lines[j])
                                              : std::string_view{};
                result.per_item.push_back(
                    score_pair(cand, original_lines[j],
                               std::vector<std::string>{original_lines[j]}));
            }
        }
    }
    if (!result.per_item.empty()) {
        DispersionMode mode = config.mode == ValidationMode::algorithmic ? DispersionMode::std_dev
                                                                         : DispersionMode::sem;
        result.aggregate = aggregate(result.per_item, mode);
    }
    if (!normalized_items.empty())
        result.aggregate_normalized = aggregate(normalized_items, DispersionMode::std_dev);
    return result;
}

} // namespace tokpack
