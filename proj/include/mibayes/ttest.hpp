#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "mibayes/errors.hpp"
#include "mibayes/special_functions.hpp"

namespace mibayes {

struct TTestResult {
    double t = 0.0;
    double p_value = 1.0;
    bool significant = false;
    std::size_t n = 0;
};

inline constexpr double kSignificanceLevel = 0.05;

namespace detail {

inline TTestResult finish_ttest(std::size_t n, double mean, double var, double alpha) {
    TTestResult r;
    r.n = n;
    if (n < 2) return r;
    if (var <= 0.0) {
        if (mean == 0.0) return r;
        r.t = mean > 0.0 ? INFINITY : -INFINITY;
        r.p_value = 0.0;
        r.significant = true;
        return r;
    }
    const auto k = static_cast<double>(n);
    r.t = mean / std::sqrt(var / k);
    r.p_value = student_t_two_sided_p(r.t, k - 1.0);
    r.significant = r.p_value < alpha;
    return r;
}

}  // namespace detail

/// Paired t test from running sums of the differences d_i = a_i - b_i.
/// Intended for 0/1 correctness differences, where the sums are exact.
///
/// Conventions: fewer than two pairs, or all differences zero, give t = 0 and
/// no significance; zero spread with a non-zero mean difference is significant
/// (t = +-inf, p = 0).
inline TTestResult paired_ttest_from_sums(std::size_t n, double sum, double sum_sq,
                                          double alpha = kSignificanceLevel) {
    if (n < 2) return detail::finish_ttest(n, 0.0, 0.0, alpha);
    const auto k = static_cast<double>(n);
    const double mean = sum / k;
    return detail::finish_ttest(n, mean, (sum_sq - sum * mean) / (k - 1.0), alpha);
}

/// Two-tailed paired t test with the same conventions as paired_ttest_from_sums.
inline TTestResult paired_ttest(std::span<const double> a, std::span<const double> b,
                                double alpha = kSignificanceLevel) {
    if (a.size() != b.size()) throw DomainError("paired_ttest: vectors differ in length");
    const auto n = a.size();
    if (n < 2) return detail::finish_ttest(n, 0.0, 0.0, alpha);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
    return detail::finish_ttest(n, mean, ss / static_cast<double>(n - 1), alpha);
}

}  // namespace mibayes
