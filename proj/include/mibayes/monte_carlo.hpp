#pragma once

// Dirichlet Monte Carlo reference for the posterior of I, goodness-of-fit
// measures against the fitted approximations, and tail scaling exponents.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <thread>
#include <vector>

#include "mibayes/contingency_table.hpp"
#include "mibayes/distribution.hpp"
#include "mibayes/random.hpp"

namespace mibayes {

struct McEnsemble {
    std::vector<double> samples;  // I values in nats, in generation order
    std::uint64_t seed = 0;
    std::size_t count = 0;
    double i_max = 0.0;

    double mean() const {
        return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    }
    /// Unbiased sample variance.
    double variance() const {
        const double m = mean();
        double ss = 0.0;
        for (double x : samples) ss += (x - m) * (x - m);
        return ss / static_cast<double>(samples.size() - 1);
    }
    double standard_error() const { return std::sqrt(variance() / static_cast<double>(samples.size())); }
};

/// Mutual information of a chance matrix given row-major, 0 log 0 = 0.
inline double mutual_information(std::span<const double> pi, std::size_t rows, std::size_t cols,
                                 std::span<double> row_scratch, std::span<double> col_scratch) {
    std::fill(row_scratch.begin(), row_scratch.end(), 0.0);
    std::fill(col_scratch.begin(), col_scratch.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            row_scratch[i] += pi[i * cols + j];
            col_scratch[j] += pi[i * cols + j];
        }
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double p = pi[i * cols + j];
            if (p > 0.0) sum += p * std::log(p / (row_scratch[i] * col_scratch[j]));
        }
    return sum;
}

inline constexpr std::size_t kMcBlockSize = 1u << 16;

/// Draw `count` values of I(pi) with pi ~ Dirichlet(table counts).
///
/// Samples are produced in blocks of kMcBlockSize; block b uses the random
/// stream (seed, b), so the ensemble is identical for any thread count.
inline McEnsemble mc_sample_mi(const ContingencyTable& t, std::size_t count, std::uint64_t seed,
                               unsigned threads = 0) {
    if (count < 1) throw DomainError("mc_sample_mi: count must be at least 1");
    McEnsemble e;
    e.seed = seed;
    e.count = count;
    e.i_max = t.i_max();
    e.samples.resize(count);
    const std::size_t blocks = (count + kMcBlockSize - 1) / kMcBlockSize;
    const std::vector<double> alpha(t.cells().begin(), t.cells().end());

    auto run_blocks = [&](std::size_t first, std::size_t step) {
        std::vector<double> pi(alpha.size());
        std::vector<double> rows(t.rows());
        std::vector<double> cols(t.cols());
        for (std::size_t b = first; b < blocks; b += step) {
            Rng rng(seed, b);
            const std::size_t end = std::min(count, (b + 1) * kMcBlockSize);
            for (std::size_t k = b * kMcBlockSize; k < end; ++k) {
                sample_dirichlet(alpha, rng, pi);
                e.samples[k] = std::clamp(mutual_information(pi, t.rows(), t.cols(), rows, cols), 0.0, e.i_max);
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
    if (threads <= 1) {
        run_blocks(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run_blocks, w, threads);
    }
    return e;
}

/// Kolmogorov-Smirnov statistic sup_x |F_n(x) - F(x)|.
inline double ks_distance(const McEnsemble& e, const FittedApprox& f) {
    if (e.samples.empty()) throw DomainError("ks_distance: empty ensemble");
    std::vector<double> sorted = e.samples;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const double F = cdf(f, sorted[k]);
        d = std::max({d, F - static_cast<double>(k) / n, static_cast<double>(k + 1) / n - F});
    }
    return d;
}

/// Exponents of the power laws p(I) ~ I^lower near 0 and
/// p(I_max - I_c) ~ I_c^upper near I_max.
struct TailExponents {
    double lower = 0.0;
    double upper = 0.0;
};

inline TailExponents tail_exponents(std::size_t r, std::size_t s) {
    if (r < 2 || s < 2) throw DomainError("tail_exponents: cardinalities must be at least 2");
    if (r > s) std::swap(r, s);
    const auto rd = static_cast<double>(r);
    const auto sd = static_cast<double>(s);
    return {0.5 * (rd - 1.0) * (sd - 1.0) - 1.0, 0.5 * (rd - 3.0)};
}

/// Log-log slope of the ensemble's density over the decade [q/10, q], where q
/// is the empirical `upper_quantile` of I. The decade is split into `bins`
/// logarithmic bins and a least-squares line is fitted to log density.
inline double lower_tail_slope(const McEnsemble& e, double upper_quantile = 0.01, std::size_t bins = 5) {
    std::vector<double> sorted = e.samples;
    std::sort(sorted.begin(), sorted.end());
    const auto idx = static_cast<std::size_t>(upper_quantile * static_cast<double>(sorted.size()));
    const double hi = sorted.at(std::max<std::size_t>(idx, 1) - 1);
    if (!(hi > 0.0)) throw DomainError("lower_tail_slope: lower tail collapsed at zero");
    const double log_lo = std::log(hi / 10.0);
    const double width = std::log(10.0) / static_cast<double>(bins);
    std::vector<double> counts(bins, 0.0);
    for (double x : sorted) {
        if (x < hi / 10.0 || x >= hi) continue;
        auto b = static_cast<std::size_t>((std::log(x) - log_lo) / width);
        counts[std::min(b, bins - 1)] += 1.0;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        if (counts[b] <= 0.0) continue;
        const double left = std::exp(log_lo + width * b);
        const double right = std::exp(log_lo + width * (b + 1));
        const double x = 0.5 * (std::log(left) + std::log(right));
        const double y = std::log(counts[b] / (right - left));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1.0;
    }
    if (m < 2.0) throw DomainError("lower_tail_slope: too few populated bins");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace mibayes
