#include "tokpack/batch.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "tokpack/errors.hpp"

namespace tokpack {

BatchPlan plan_batches(const std::vector<std::string>& lines, std::int64_t budget_tokens,
                       const CostModel& model) {
    if (budget_tokens <= 0) throw std::invalid_argument("plan_batches: budget must be positive");
    BatchPlan plan;
    plan.budget_tokens = budget_tokens;
    plan.cost_model_name = model.name();

    std::size_t start = 0;
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::int64_t line_cost = model.cost(lines[i]);
        if (line_cost > budget_tokens) {
            if (i > start) plan.batches.push_back({start, i, false});
            plan.batches.push_back({i, i + 1, true});
            start = i + 1;
            acc = 0;
            continue;
        }
        if (acc + line_cost > budget_tokens && i > start) {
            plan.batches.push_back({start, i, false});
            start = i;
            acc = 0;
        }
        acc += line_cost;
    }
    if (start < lines.size()) plan.batches.push_back({start, lines.size(), false});
    return plan;
}

std::string batch_text(const std::vector<std::string>& lines, const LineRange& range) {
    std::string text;
    for (std::size_t i = range.begin; i < range.end; ++i) {
        if (i > range.begin) text += '\n';
        text += lines[i];
    }
    return text;
}

namespace {

// Runs fn(i) for i in [0, count) on up to `jobs` threads; exceptions are
// captured per index by the caller's fn.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t workers = std::max(1, jobs);
    workers = std::min(workers, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    }
    for (auto& t : threads) t.join();
}

} // namespace

std::vector<BatchCompression> run_batch_compression(const std::vector<std::string>& lines,
                                                    const CompressionParams& params,
                                                    std::int64_t budget_tokens, int jobs) {
    params.validate();
    BatchPlan plan = plan_batches(lines, budget_tokens, params.cost_model);
    std::vector<BatchCompression> out(plan.batches.size());
    parallel_for(plan.batches.size(), jobs, [&](std::size_t i) {
        out[i].batch_id = i;
        out[i].range = plan.batches[i];
        try {
            out[i].result = compress(batch_text(lines, plan.batches[i]), params);
        } catch (const std::exception& e) {
            out[i].failed = true;
            out[i].error = e.what();
        }
    });
    return out;
}

std::vector<SweepRow> sweep_lmax(const std::vector<std::string>& lines, const std::string& dataset,
                                 std::size_t l_lo, std::size_t l_hi, std::size_t f_min,
                                 const CostModel& model, std::optional<std::int64_t> budget_tokens,
                                 int jobs) {
    if (l_lo < 2 || l_hi < l_lo) throw std::invalid_argument("sweep_lmax: bad l_max range");
    std::vector<SweepRow> rows;
    for (std::size_t l = l_lo; l <= l_hi; ++l) {
        CompressionParams params;
        params.l_max = l;
        params.l_min = 2;
        params.f_min = f_min;
        params.cost_model = model;

        std::int64_t original = 0, compressed = 0, dict = 0;
        std::size_t entries = 0;
        if (budget_tokens) {
            auto batches = run_batch_compression(lines, params, *budget_tokens, jobs);
            for (const auto& b : batches) {
                if (b.failed) continue;
                original += b.result.original_tokens;
                compressed += b.result.compressed_tokens;
                dict += b.result.dictionary_tokens;
                entries += b.result.dictionary.size();
            }
        } else {
            CompressionResult result = compress(join_lines(lines, false), params);
            original = result.original_tokens;
            compressed = result.compressed_tokens;
            dict = result.dictionary_tokens;
            entries = result.dictionary.size();
        }
        if (original == 0) continue;  // nothing to measure
        RatioReport ratio = compression_ratio(original, compressed, dict);
        rows.push_back(SweepRow{dataset, l, ratio.cr, ratio.cr_input, entries, std::nullopt});
    }
    return rows;
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "dataset,l_max,cr,cr_input,dict_entries,levenshtein,rouge,bleu\n";
    for (const auto& row : rows) {
        out += csv_escape(row.dataset);
        out += ',' + std::to_string(row.l_max);
        out += ',' + fixed6(row.cr);
        out += ',' + fixed6(row.cr_input);
        out += ',' + std::to_string(row.dict_entries);
        if (row.scores) {
            out += ',' + fixed6(row.scores->levenshtein);
            out += ',' + fixed6(row.scores->rouge1_recall);
            out += ',' + fixed6(row.scores->bleu);
        } else {
            out += ",,,";
        }
        out += '\n';
    }
    return out;
}

RegressionReport regression_report(const std::vector<SweepRow>& rows) {
    std::vector<double> x, lev, rouge, bleu_scores;
    for (const auto& row : rows) {
        if (!row.scores) continue;
        x.push_back(row.cr_input);
        lev.push_back(row.scores->levenshtein);
        rouge.push_back(row.scores->rouge1_recall);
        bleu_scores.push_back(row.scores->bleu);
    }
    if (x.size() < 3)
        throw std::invalid_argument("regression_report: needs at least 3 rows with scores");
    RegressionReport report;
    report.levenshtein = ols_fit(x, lev);
    report.rouge = ols_fit(x, rouge);
    report.bleu = ols_fit(x, bleu_scores);
    return report;
}

std::string regression_json(const RegressionReport& report) {
    auto fit_json = [](const LinearFit& fit) {
        nlohmann::ordered_json j;
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
        j["r2"] = fit.r2;
        j["defined"] = fit.defined;
        return j;
    };
    nlohmann::ordered_json j;
    j["levenshtein"] = fit_json(report.levenshtein);
    j["rouge"] = fit_json(report.rouge);
    j["bleu"] = fit_json(report.bleu);
    return j.dump(2) + "\n";
}

Corpus read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Corpus corpus;
    corpus.trailing_newline = !content.empty() && content.back() == '\n';
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) {
            corpus.lines.push_back(content.substr(pos));
            break;
        }
        corpus.lines.push_back(content.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return corpus;
}

std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out += '\n';
        out += lines[i];
    }
    if (trailing_newline && !lines.empty()) out += '\n';
    return out;
}

namespace {

// Minimal CSV reader: quoted fields, escaped quotes, CRLF tolerant.
std::vector<std::vector<std::string>> parse_csv(std::string_view content) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    auto end_field = [&]() {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&]() {
        if (field_started || !field.empty() || !row.empty()) {
            end_field();
            rows.push_back(std::move(row));
            row.clear();
        }
    };
    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
            field_started = true;  // next field exists even if empty
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_row();
        } else {
            field += c;
            field_started = true;
        }
    }
    end_row();
    return rows;
}

} // namespace

std::vector<LogTemplate> parse_loghub_templates_csv(std::string_view content) {
    auto rows = parse_csv(content);
    if (rows.empty()) throw ParseError("templates csv: empty file");
    const auto& header = rows.front();
    std::size_t id_col = header.size(), tmpl_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "EventId") id_col = c;
        if (header[c] == "EventTemplate") tmpl_col = c;
    }
    if (id_col == header.size() || tmpl_col == header.size())
        throw ParseError("templates csv: missing EventId/EventTemplate columns");
    std::vector<LogTemplate> templates;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() <= std::max(id_col, tmpl_col))
            throw ParseError("templates csv row " + std::to_string(r + 1) + ": too few fields");
        templates.push_back(make_template(meta_label(templates.size() + 1), row[tmpl_col]));
    }
    return templates;
}

LogHubDataset load_loghub_dataset(const std::filesystem::path& root, const std::string& name) {
    LogHubDataset ds;
    ds.name = name;
    std::filesystem::path dir = root / name;
    ds.corpus = read_corpus(dir / (name + "_2k.log"));
    std::filesystem::path templates_path = dir / (name + "_templates.csv");
    if (std::filesystem::exists(templates_path)) {
        std::ifstream in(templates_path, std::ios::binary);
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        ds.templates = parse_loghub_templates_csv(content);
    }
    return ds;
}

} // namespace tokpack
