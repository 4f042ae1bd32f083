#pragma once

// Leading-order posterior moments of I for incomplete samples, assuming an
// ignorable missingness mechanism. `margin_only[i]` counts instances where only
// the row variable was observed (value i); the other orientation is handled by
// transposing.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mibayes/contingency_table.hpp"
#include "mibayes/errors.hpp"
#include "mibayes/log.hpp"
#include "mibayes/moments.hpp"

namespace mibayes {

class AugmentedTable {
public:
    AugmentedTable(ContingencyTable counts, std::vector<double> margin_only)
        : counts_(std::move(counts)), margin_only_(std::move(margin_only)) {
        if (margin_only_.size() != counts_.rows()) {
            throw DomainError("AugmentedTable: margin-only vector must have one entry per row");
        }
        total_ = counts_.total();
        for (std::size_t i = 0; i < margin_only_.size(); ++i) {
            const double m = margin_only_[i];
            if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("AugmentedTable: negative margin-only count");
            if (m > 0.0 && !(counts_.row_total(i) > 0.0)) {
                throw DomainError("AugmentedTable: row " + std::to_string(i) +
                                  " has margin-only counts but no jointly observed counts");
            }
            total_ += m;
        }
    }

    const ContingencyTable& counts() const noexcept { return counts_; }
    std::span<const double> margin_only() const noexcept { return margin_only_; }
    double margin_only(std::size_t i) const { return margin_only_[i]; }
    /// N = n + sum_i n_i?
    double total() const noexcept { return total_; }
    bool complete() const {
        return std::all_of(margin_only_.begin(), margin_only_.end(), [](double m) { return m == 0.0; });
    }

private:
    ContingencyTable counts_;
    std::vector<double> margin_only_;
    double total_ = 0.0;
};

/// The sums entering the leading-order variance, kept for inspection.
struct MissingDataTerms {
    std::vector<double> pi_hat;  // row-major estimate of the chances
    double K = 0.0;              // K~
    double J = 0.0;              // J~
    double Q = 0.0;              // Q~
    double P = 0.0;              // P~
};

namespace detail {

inline std::vector<double> missing_pi_hat(const AugmentedTable& a) {
    const auto& t = a.counts();
    const double N = a.total();
    std::vector<double> pi(t.rows() * t.cols(), 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double ni = t.row_total(i);
        if (!(ni > 0.0)) continue;
        const double row_mass = (ni + a.margin_only(i)) / N;
        for (std::size_t j = 0; j < t.cols(); ++j) pi[i * t.cols() + j] = row_mass * t(i, j) / ni;
    }
    return pi;
}

}  // namespace detail

inline MissingDataTerms missing_data_terms(const AugmentedTable& a) {
    const auto& t = a.counts();
    const std::size_t r = t.rows();
    const std::size_t s = t.cols();
    const double N = a.total();
    MissingDataTerms out;
    out.pi_hat = detail::missing_pi_hat(a);
    const auto& pi = out.pi_hat;

    std::vector<double> pi_row(r, 0.0), pi_col(s, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            pi_row[i] += pi[i * s + j];
            pi_col[j] += pi[i * s + j];
        }

    for (std::size_t i = 0; i < r; ++i) {
        double rho_row = 0.0;  // rho_i+
        double j_row = 0.0;    // J~_i+
        for (std::size_t j = 0; j < s; ++j) {
            const double nij = t(i, j);
            if (!(nij > 0.0)) continue;  // rho_ij -> 0 as n_ij -> 0
            const double p = pi[i * s + j];
            const double rho = N * p * p / nij;
            const double log_ratio = std::log(p / (pi_row[i] * pi_col[j]));
            rho_row += rho;
            j_row += rho * log_ratio;
            out.K += rho * log_ratio * log_ratio;
        }
        // rho_i? = N pi_i+^2 / n_i?; the n_i? = 0 limit (rho_i? = inf) gives
        // Q~_i? = 1 and no contribution to P~.
        const double m = a.margin_only(i);
        double q_row = 1.0;
        if (m > 0.0) {
            const double rho_margin = N * pi_row[i] * pi_row[i] / m;
            q_row = rho_margin / (rho_margin + rho_row);
            out.P += j_row * j_row * q_row / rho_margin;
        }
        out.Q += rho_row * q_row;
        out.J += j_row * q_row;
    }
    return out;
}

/// Leading-order mean: I(pi_hat) with pi_hat_ij = ((n_i+ + n_i?)/N)(n_ij/n_i+).
inline double mi_mean_missing(const AugmentedTable& a) {
    const auto& t = a.counts();
    const auto pi = detail::missing_pi_hat(a);
    const std::size_t s = t.cols();
    std::vector<double> pi_row(t.rows(), 0.0), pi_col(s, 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < s; ++j) {
            pi_row[i] += pi[i * s + j];
            pi_col[j] += pi[i * s + j];
        }
    double sum = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < s; ++j) {
            const double p = pi[i * s + j];
            if (p > 0.0) sum += p * std::log(p / (pi_row[i] * pi_col[j]));
        }
    return std::clamp(sum, 0.0, t.i_max());
}

/// Leading-order variance (K~ - J~^2/Q~ - P~) / N, clamped at zero.
inline double mi_variance_missing(const AugmentedTable& a) {
    const auto terms = missing_data_terms(a);
    const double var = (terms.K - terms.J * terms.J / terms.Q - terms.P) / a.total();
    if (var < 0.0) {
        warn("incomplete-sample variance negative (" + std::to_string(var) + "); clamped to 0");
        return 0.0;
    }
    return var;
}

inline MomentSummary moments_missing(const AugmentedTable& a) {
    const double var = mi_variance_missing(a);
    return {mi_mean_missing(a), var, a.counts().i_max(), var, var == 0.0};
}

/// Moments when the column variable is sometimes unobserved: `column_margin_only[j]`
/// counts instances where only the column value j was seen. Evaluated on the
/// transposed table, where those counts become row margins.
inline MomentSummary mi_moments_missing_class(const ContingencyTable& t, std::vector<double> column_margin_only) {
    return moments_missing(AugmentedTable(t.transposed(), std::move(column_margin_only)));
}

/// Dispatch for a table with partially observed rows, columns, or neither.
/// Margin-only counts on both axes at once need an iterative (EM) estimate
/// of the chances, which is not provided; that case is rejected.
inline MomentSummary moments_incomplete(const ContingencyTable& t, const std::vector<double>& row_margin_only,
                                        const std::vector<double>& col_margin_only) {
    auto any = [](const std::vector<double>& v) {
        return std::any_of(v.begin(), v.end(), [](double m) { return m > 0.0; });
    };
    const bool rows_missing = any(row_margin_only);
    const bool cols_missing = any(col_margin_only);
    if (rows_missing && cols_missing) {
        throw InputError(
            "values missing on both variables: this needs an EM estimate of the chances, which is not supported");
    }
    if (rows_missing) return moments_missing(AugmentedTable(t, row_margin_only));
    if (cols_missing) return mi_moments_missing_class(t, col_margin_only);
    return moments(t);
}

}  // namespace mibayes
