#pragma once

// Seedable variate generation for the Monte Carlo oracle.
//
// Engine: std::mt19937_64 (its output sequence is fixed by the C++ standard),
// seeded from (seed, stream) through SplitMix64 so that independent streams
// can be derived deterministically for parallel work. Uniforms, normals and
// gamma variates are computed here rather than with <random> distributions,
// whose algorithms are implementation-defined.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

#include "mibayes/errors.hpp"

namespace mibayes {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal by the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Gamma(shape, 1) for shape >= 1 by Marsaglia-Tsang rejection.
    double gamma_ge1(double shape) {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// log of a Gamma(shape, 1) variate. Shapes below one are boosted,
    /// G(a) = G(a + 1) U^(1/a), in log space so tiny shapes do not underflow.
    /// Shape zero is the point mass at 0 and yields -infinity.
    double log_gamma_variate(double shape) {
        if (!(shape >= 0.0) || !std::isfinite(shape)) throw DomainError("gamma variate: shape must be >= 0");
        if (shape == 0.0) return -std::numeric_limits<double>::infinity();
        if (shape >= 1.0) return std::log(gamma_ge1(shape));
        return std::log(gamma_ge1(shape + 1.0)) + std::log(uniform()) / shape;
    }

    double gamma(double shape) { return std::exp(log_gamma_variate(shape)); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Draw one point of the simplex from Dirichlet(alpha), normalized in log space.
inline void sample_dirichlet(std::span<const double> alpha, Rng& rng, std::span<double> out) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        out[k] = rng.log_gamma_variate(alpha[k]);
        max_log = std::max(max_log, out[k]);
    }
    if (!std::isfinite(max_log)) throw DomainError("sample_dirichlet: all concentration parameters are zero");
    double sum = 0.0;
    for (auto& v : out.first(alpha.size())) {
        v = std::exp(v - max_log);
        sum += v;
    }
    for (auto& v : out.first(alpha.size())) v /= sum;
}

}  // namespace mibayes
