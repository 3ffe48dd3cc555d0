#pragma once

// Independent reference implementations used only by tests. Each one takes a
// deliberately different route from the library code it checks.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tokpack::testing {

// Edit distance straight from the recurrence, memoized top-down. The library
// uses an iterative two-row table with prefix/suffix trimming; this one does
// not share that code path.
inline std::size_t brute_force_edit_distance(std::string_view a, std::string_view b) {
    const std::size_t rows = a.size() + 1;
    const std::size_t cols = b.size() + 1;
    std::vector<std::size_t> memo(rows * cols, static_cast<std::size_t>(-1));

    auto solve = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
        std::size_t& slot = memo[i * cols + j];
        if (slot != static_cast<std::size_t>(-1)) return slot;
        if (i == 0) return slot = j;
        if (j == 0) return slot = i;
        std::size_t best = self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
        std::size_t del = self(self, i - 1, j) + 1;
        std::size_t ins = self(self, i, j - 1) + 1;
        if (del < best) best = del;
        if (ins < best) best = ins;
        return slot = best;
    };
    return solve(solve, a.size(), b.size());
}

// BLEU by direct n-gram enumeration: distinct candidate n-grams are found by
// pairwise comparison and counted by rescanning both word lists, no hashing.
inline double bleu_oracle(const std::vector<std::string>& cand,
                          const std::vector<std::string>& ref) {
    constexpr double kEpsilon = 1e-9;
    if (cand.empty() && ref.empty()) return 1.0;
    if (cand.empty() || ref.empty()) return 0.0;

    auto gram_equal = [](const std::vector<std::string>& xs, std::size_t i,
                         const std::vector<std::string>& ys, std::size_t j, std::size_t n) {
        for (std::size_t k = 0; k < n; ++k)
            if (xs[i + k] != ys[j + k]) return false;
        return true;
    };

    std::size_t max_order = cand.size() < 4 ? cand.size() : 4;
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= max_order; ++n) {
        std::size_t total = cand.size() - n + 1;
        std::size_t matched = 0;
        for (std::size_t i = 0; i + n <= cand.size(); ++i) {
            bool first_occurrence = true;
            for (std::size_t p = 0; p < i; ++p)
                if (gram_equal(cand, p, cand, i, n)) {
                    first_occurrence = false;
                    break;
                }
            if (!first_occurrence) continue;
            std::size_t in_cand = 0;
            for (std::size_t p = 0; p + n <= cand.size(); ++p)
                if (gram_equal(cand, p, cand, i, n)) ++in_cand;
            std::size_t in_ref = 0;
            for (std::size_t p = 0; p + n <= ref.size(); ++p)
                if (gram_equal(ref, p, cand, i, n)) ++in_ref;
            matched += in_cand < in_ref ? in_cand : in_ref;
        }
        double numerator = matched > 0 ? static_cast<double>(matched) : kEpsilon;
        log_sum += std::log(numerator / static_cast<double>(total));
    }
    double geo_mean = std::exp(log_sum / static_cast<double>(max_order));
    double brevity = 1.0;
    if (cand.size() < ref.size())
        brevity =
            std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
    return brevity * geo_mean;
}

struct OlsOracleFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool defined = true;
};

// Normal equations on raw sums, r-squared from explicit residuals. The
// library centers the data first and derives r2 from covariances instead.
inline OlsOracleFit ols_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    OlsOracleFit fit;
    const std::size_t n = x.size();
    if (n < 2) {
        fit.defined = false;
        return fit;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom == 0.0) {
        fit.defined = false;
        return fit;
    }
    const double mean_y = sy / static_cast<double>(n);
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    if (ss_tot == 0.0) {
        fit.slope = 0.0;
        fit.intercept = mean_y;
        fit.r2 = 0.0;
        return fit;
    }
    fit.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(n);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / ss_tot;
    return fit;
}

} // namespace tokpack::testing
