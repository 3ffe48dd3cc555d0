#include "tokpack/compress.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace tokpack {

void CompressionParams::validate() const {
    if (l_min < 2) throw std::invalid_argument("compression params: l_min must be >= 2");
    if (l_max < l_min) throw std::invalid_argument("compression params: l_max must be >= l_min");
    if (f_min < 2) throw std::invalid_argument("compression params: f_min must be >= 2");
}

bool savings_holds(std::int64_t f, std::int64_t n_s, std::int64_t n_m) {
    return (1 + f) * n_m + n_s < f * n_s;
}

namespace {

struct Candidate {
    std::string span;                   // rendered window
    std::vector<std::size_t> positions; // all window starts, ascending
};

} // namespace

std::vector<Selection> find_subsequences_at_length(const WordSequence& seq, std::size_t length,
                                                   std::size_t f_min, std::uint64_t& next_index,
                                                   const CostModel& model) {
    std::vector<Selection> selected;
    const std::size_t n = seq.size();
    if (length < 2 || n < length) return selected;

    // A word containing any meta pattern poisons every window it sits in:
    // admitting it would put the pattern into a dictionary value.
    std::vector<char> blocked(n, 0);
    for (std::size_t i = 0; i < n; ++i) blocked[i] = contains_meta_pattern(seq.words[i]) ? 1 : 0;

    std::unordered_map<std::string, std::size_t> group_of;
    std::vector<Candidate> candidates;
    std::size_t blocked_until = 0;  // first window start with no blocked word
    for (std::size_t k = 0; k + 1 < length; ++k)
        if (blocked[k]) blocked_until = k + 1;
    for (std::size_t i = 0; i + length <= n; ++i) {
        if (blocked[i + length - 1]) blocked_until = i + length;
        if (i < blocked_until) continue;
        std::string span = render_span(seq, i, length);
        auto [it, inserted] = group_of.try_emplace(std::move(span), candidates.size());
        if (inserted) candidates.push_back(Candidate{it->first, {}});
        candidates[it->second].positions.push_back(i);
    }

    std::vector<std::size_t> order;
    for (std::size_t g = 0; g < candidates.size(); ++g)
        if (candidates[g].positions.size() >= f_min) order.push_back(g);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = candidates[a];
        const auto& cb = candidates[b];
        if (ca.positions.size() != cb.positions.size())
            return ca.positions.size() > cb.positions.size();
        if (ca.span.size() != cb.span.size()) return ca.span.size() > cb.span.size();
        return ca.positions.front() < cb.positions.front();
    });

    std::vector<char> used(n, 0);
    auto range_free = [&](std::size_t start) {
        for (std::size_t i = start; i < start + length; ++i)
            if (used[i]) return false;
        return true;
    };

    for (std::size_t g : order) {
        const Candidate& cand = candidates[g];
        std::vector<std::size_t> valid;
        std::size_t next_free = 0;
        for (std::size_t p : cand.positions) {
            if (p < next_free) continue;  // overlaps a position kept for this candidate
            if (!range_free(p)) continue;
            valid.push_back(p);
            next_free = p + length;
        }
        if (valid.size() < f_min) continue;

        MetaToken meta = make_meta_token(next_index);
        std::int64_t n_s = model.cost(cand.span);
        std::int64_t n_m = model.cost(meta.label);
        if (!savings_holds(static_cast<std::int64_t>(valid.size()), n_s, n_m)) continue;

        for (std::size_t p : valid)
            for (std::size_t i = p; i < p + length; ++i) used[i] = 1;
        ++next_index;
        selected.push_back(Selection{cand.span, std::move(valid), std::move(meta), length});
    }
    return selected;
}

WordSequence apply_replacements(const WordSequence& seq, const std::vector<Selection>& selections) {
    const std::size_t n = seq.size();
    struct Repl {
        const Selection* sel;
    };
    std::unordered_map<std::size_t, Repl> replacement_at;
    std::vector<char> covered(n, 0);
    for (const auto& sel : selections) {
        for (std::size_t p : sel.positions) {
            if (p + sel.length > n) throw std::logic_error("apply_replacements: span out of range");
            for (std::size_t i = p; i < p + sel.length; ++i) {
                if (covered[i]) throw std::logic_error("apply_replacements: overlapping selections");
                covered[i] = 1;
            }
            replacement_at.emplace(p, Repl{&sel});
        }
    }

    WordSequence out;
    out.separators.clear();
    out.separators.push_back(seq.separators[0]);
    std::size_t i = 0;
    while (i < n) {
        auto it = replacement_at.find(i);
        if (it != replacement_at.end()) {
            const Selection& sel = *it->second.sel;
            out.words.push_back(sel.meta.label);
            out.separators.push_back(seq.separators[i + sel.length]);
            i += sel.length;
        } else {
            out.words.push_back(seq.words[i]);
            out.separators.push_back(seq.separators[i + 1]);
            ++i;
        }
    }
    return out;
}

CompressionResult compress(std::string_view text, const CompressionParams& params,
                           CompressionTrace* trace) {
    params.validate();

    const std::uint64_t first_index = max_meta_index(text) + 1;
    std::uint64_t next_index = first_index;

    WordSequence working = segment(text);
    DictionaryParams dict_params{params.l_max, params.l_min, params.f_min, first_index};
    Dictionary dict(dict_params, params.cost_model.name());
    if (trace) {
        trace->passes.clear();
        trace->first_meta_index = first_index;
    }

    for (std::size_t length = params.l_max; length >= params.l_min; --length) {
        std::vector<Selection> sels =
            find_subsequences_at_length(working, length, params.f_min, next_index,
                                        params.cost_model);
        if (!sels.empty()) {
            working = apply_replacements(working, sels);
            for (const auto& sel : sels) dict.add(sel.meta.label, sel.subsequence);
        }
        if (trace) trace->passes.push_back(std::move(sels));
    }

    CompressionResult result;
    result.original_tokens = params.cost_model.cost(text);
    result.compressed_tokens = params.cost_model.cost(working);
    std::int64_t dict_tokens = 0;
    for (const auto& e : dict.entries())
        dict_tokens += params.cost_model.cost(e.label) + params.cost_model.cost(e.value);
    result.dictionary_tokens = dict_tokens;
    result.compressed = std::move(working);
    result.dictionary = std::move(dict);
    return result;
}

} // namespace tokpack
