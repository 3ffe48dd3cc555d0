#include "tokpack/cost_model.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "tokpack/errors.hpp"

namespace tokpack {

std::int64_t CostModel::cost(std::string_view text) const {
    std::int64_t total = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_separator_char(text[i])) ++i;
        std::size_t word_start = i;
        while (i < n && !is_separator_char(text[i])) ++i;
        if (i > word_start) total += word_cost_(text.substr(word_start, i - word_start));
    }
    return total;
}

std::int64_t CostModel::cost(const WordSequence& seq) const {
    std::int64_t total = 0;
    for (const auto& w : seq.words) total += word_cost_(w);
    return total;
}

std::int64_t char_heuristic_word_cost(std::string_view word) {
    if (word.empty()) return 0;
    return static_cast<std::int64_t>((word.size() + 3) / 4);
}

CostModel CostModel::word_unit() {
    return CostModel("word-unit", [](std::string_view) -> std::int64_t { return 1; });
}

CostModel CostModel::char_heuristic() {
    return CostModel("char-heuristic", char_heuristic_word_cost);
}

CostModel CostModel::external_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cost table: cannot open " + path.string());

    auto table = std::make_shared<std::unordered_map<std::string, std::int64_t>>();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("cost table " + path.string() + ":" + std::to_string(lineno) +
                             ": expected word<TAB>count");
        std::string word = line.substr(0, tab);
        if (word.empty())
            throw ParseError("cost table " + path.string() + ":" + std::to_string(lineno) +
                             ": empty word");
        for (char c : word)
            if (is_separator_char(c))
                throw ParseError("cost table " + path.string() + ":" + std::to_string(lineno) +
                                 ": word contains whitespace");
        std::int64_t count = 0;
        const char* first = line.data() + tab + 1;
        const char* last = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(first, last, count);
        if (ec != std::errc() || ptr != last || count < 0)
            throw ParseError("cost table " + path.string() + ":" + std::to_string(lineno) +
                             ": bad count '" + std::string(first, last) + "'");
        (*table)[std::move(word)] = count;
    }

    return CostModel("external:" + path.string(),
                     [table](std::string_view word) -> std::int64_t {
                         auto it = table->find(std::string(word));
                         if (it != table->end()) return it->second;
                         return char_heuristic_word_cost(word);
                     });
}

CostModel CostModel::from_spec(std::string_view spec) {
    if (spec == "word") return word_unit();
    if (spec == "char") return char_heuristic();
    constexpr std::string_view prefix = "external:";
    if (spec.substr(0, prefix.size()) == prefix) {
        std::string_view path = spec.substr(prefix.size());
        if (path.empty()) throw std::invalid_argument("cost model: external: needs a path");
        return external_table(std::filesystem::path(path));
    }
    throw std::invalid_argument("unknown cost model '" + std::string(spec) +
                                "' (expected word, char, or external:<path>)");
}

std::int64_t cost_of_span(const WordSequence& seq, std::size_t start, std::size_t count,
                          const CostModel& model) {
    if (start > seq.size() || count > seq.size() - start)
        throw std::out_of_range("cost_of_span: span [" + std::to_string(start) + ", +" +
                                std::to_string(count) + ") exceeds " + std::to_string(seq.size()) +
                                " words");
    std::int64_t total = 0;
    for (std::size_t i = start; i < start + count; ++i) total += model.word_cost(seq.words[i]);
    return total;
}

} // namespace tokpack
