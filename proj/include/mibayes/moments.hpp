#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mibayes/contingency_table.hpp"
#include "mibayes/log.hpp"
#include "mibayes/special_functions.hpp"

namespace mibayes {

/// Posterior mean and variance of the mutual information (nats).
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    double i_max = 0.0;
    double leading_variance = 0.0;  // the O(1/n) term alone
    bool variance_clamped = false;
};

/// Intermediate sums of the variance expansion, exposed for tests and reports.
struct VarianceTerms {
    double K = 0.0;
    double J = 0.0;
    double M = 0.0;
    double Q = 0.0;
};

struct VarianceApprox {
    double variance = 0.0;
    double leading = 0.0;
    bool clamped = false;
    VarianceTerms terms;
};

/// Plug-in mutual information of the relative frequencies n_ij / n.
/// Empty cells contribute nothing (0 log 0 = 0).
inline double empirical_mi(const ContingencyTable& t) {
    const double n = t.total();
    double sum = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const double nij = t(i, j);
            if (nij <= 0.0) continue;
            sum += nij * std::log(nij * n / (t.row_total(i) * t.col_total(j)));
        }
    }
    return std::clamp(sum / n, 0.0, t.i_max());
}

/// Exact posterior mean E[I] under the Dirichlet posterior with parameters n_ij.
///
/// Evaluated as (1/n) [sum_ij n_ij psi(n_ij+1) - sum_i n_i+ psi(n_i+ +1)
///                     - sum_j n_+j psi(n_+j +1) + n psi(n+1)],
/// which regroups the cellwise form; cells, rows and columns with zero count drop out.
inline double mi_mean_exact(const ContingencyTable& t) {
    const double n = t.total();
    double sum = n * digamma(n + 1.0);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const double nij = t(i, j);
            if (nij > 0.0) sum += nij * digamma(nij + 1.0);
        }
        const double ni = t.row_total(i);
        if (ni > 0.0) sum -= ni * digamma(ni + 1.0);
    }
    for (std::size_t j = 0; j < t.cols(); ++j) {
        const double nj = t.col_total(j);
        if (nj > 0.0) sum -= nj * digamma(nj + 1.0);
    }
    return std::clamp(sum / n, 0.0, t.i_max());
}

inline VarianceTerms variance_terms(const ContingencyTable& t) {
    const double n = t.total();
    VarianceTerms v;
    double q_sum = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double ni = t.row_total(i);
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const double nij = t(i, j);
            if (nij <= 0.0) continue;
            const double nj = t.col_total(j);
            const double log_ratio = std::log(nij * n / (ni * nj));
            const double w = nij / n;
            v.J += w * log_ratio;
            v.K += w * log_ratio * log_ratio;
            // (1/n_ij - 1/n_i+ - 1/n_+j + 1/n) n_ij log(...), with n_ij folded in
            v.M += log_ratio * (1.0 - nij / ni - nij / nj + nij / n);
            q_sum += nij * nij / (ni * nj);
        }
    }
    v.Q = 1.0 - q_sum;
    return v;
}

/// Variance of I to O(n^-2). Negative values of the truncated expansion are
/// clamped at zero and reported through the warning sink.
inline VarianceApprox mi_variance_approx(const ContingencyTable& t) {
    const double n = t.total();
    const auto r = static_cast<double>(t.rows());
    const auto s = static_cast<double>(t.cols());
    VarianceApprox out;
    out.terms = variance_terms(t);
    const auto& [K, J, M, Q] = out.terms;
    out.leading = (K - J * J) / (n + 1.0);
    const double second = (M + (r - 1.0) * (s - 1.0) * (0.5 - J) - Q) / ((n + 1.0) * (n + 2.0));
    out.variance = out.leading + second;
    if (out.variance < 0.0) {
        warn("variance expansion negative (" + std::to_string(out.variance) + "); clamped to 0");
        out.variance = 0.0;
        out.clamped = true;
    }
    return out;
}

inline MomentSummary moments(const ContingencyTable& t) {
    const auto var = mi_variance_approx(t);
    return {mi_mean_exact(t), var.variance, t.i_max(), var.leading, var.clamped};
}

}  // namespace mibayes
