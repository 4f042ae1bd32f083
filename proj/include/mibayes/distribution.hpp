#pragma once

// Moment-matched approximations to the posterior density of the mutual
// information, and the exceedance probability P(I > eps) the filters use.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "mibayes/errors.hpp"
#include "mibayes/log.hpp"
#include "mibayes/moments.hpp"
#include "mibayes/special_functions.hpp"

namespace mibayes {

enum class Family { gaussian, gamma, beta };

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::gamma: return "gamma";
        case Family::beta: return "beta";
    }
    return "beta";
}

inline Family parse_family(std::string_view name) {
    if (name == "gaussian" || name == "normal") return Family::gaussian;
    if (name == "gamma") return Family::gamma;
    if (name == "beta") return Family::beta;
    throw InputError("unknown family '" + std::string(name) + "'");
}

/// A fitted distribution. Parameter meaning depends on the family:
///   gaussian: first = mean, second = standard deviation
///   gamma:    first = shape, second = scale
///   beta:     first = a, second = b, on the interval [0, support]
struct FittedApprox {
    Family family = Family::beta;
    double first = 0.0;
    double second = 0.0;
    double support = 1.0;
    Family requested = Family::beta;  // differs from `family` after a fallback

    double mean() const {
        switch (family) {
            case Family::gaussian: return first;
            case Family::gamma: return first * second;
            case Family::beta: return support * first / (first + second);
        }
        return 0.0;
    }

    double variance() const {
        switch (family) {
            case Family::gaussian: return second * second;
            case Family::gamma: return first * second * second;
            case Family::beta: {
                const double ab = first + second;
                return support * support * first * second / (ab * ab * (ab + 1.0));
            }
        }
        return 0.0;
    }
};

/// Moment matching for one family. Throws FitError outside the family's
/// admissible (mean, variance) region.
inline FittedApprox fit(const MomentSummary& ms, Family family) {
    if (!(ms.variance > 0.0) || !std::isfinite(ms.variance)) {
        throw FitError(std::string(family_name(family)) + " fit needs a positive variance");
    }
    FittedApprox f;
    f.family = family;
    f.requested = family;
    switch (family) {
        case Family::gaussian:
            f.first = ms.mean;
            f.second = std::sqrt(ms.variance);
            break;
        case Family::gamma:
            if (!(ms.mean > 0.0)) throw FitError("gamma fit needs a positive mean");
            f.first = ms.mean * ms.mean / ms.variance;
            f.second = ms.variance / ms.mean;
            break;
        case Family::beta: {
            if (!(ms.i_max > 0.0)) throw FitError("beta fit needs a positive support bound");
            const double mu = ms.mean / ms.i_max;
            const double v = ms.variance / (ms.i_max * ms.i_max);
            if (!(mu > 0.0 && mu < 1.0)) throw FitError("beta fit needs 0 < mean < i_max");
            if (!(v < mu * (1.0 - mu))) throw FitError("beta fit needs variance < mean (i_max - mean)");
            const double common = mu * (1.0 - mu) / v - 1.0;
            f.first = mu * common;
            f.second = (1.0 - mu) * common;
            f.support = ms.i_max;
            break;
        }
    }
    return f;
}

/// Fit `preferred`, falling back along beta -> gamma -> gaussian.
/// Throws FitError when no family in the remaining chain is admissible.
inline FittedApprox fit_with_fallback(const MomentSummary& ms, Family preferred = Family::beta) {
    constexpr Family chain[] = {Family::beta, Family::gamma, Family::gaussian};
    bool started = false;
    std::string reasons;
    for (Family f : chain) {
        if (f == preferred) started = true;
        if (!started) continue;
        try {
            auto fitted = fit(ms, f);
            fitted.requested = preferred;
            if (f != preferred) {
                warn(std::string(family_name(preferred)) + " fit failed (" + reasons + "); using " +
                     std::string(family_name(f)));
            }
            return fitted;
        } catch (const FitError& e) {
            if (!reasons.empty()) reasons += "; ";
            reasons += e.what();
        }
    }
    throw FitError("all approximation families failed: " + reasons);
}

inline double cdf(const FittedApprox& f, double x) {
    switch (f.family) {
        case Family::gaussian: return normal_cdf((x - f.first) / f.second);
        case Family::gamma: return x <= 0.0 ? 0.0 : incomplete_gamma_p(f.first, x / f.second);
        case Family::beta: return incomplete_beta(f.first, f.second, x / f.support);
    }
    return 0.0;
}

inline double pdf(const FittedApprox& f, double x) {
    switch (f.family) {
        case Family::gaussian: {
            const double z = (x - f.first) / f.second;
            return std::exp(-0.5 * z * z) / (f.second * std::sqrt(2.0 * std::numbers::pi));
        }
        case Family::gamma:
            if (x <= 0.0) return 0.0;
            return std::exp((f.first - 1.0) * std::log(x / f.second) - x / f.second - std::lgamma(f.first)) /
                   f.second;
        case Family::beta: {
            const double y = x / f.support;
            if (y <= 0.0 || y >= 1.0) return 0.0;
            return std::exp((f.first - 1.0) * std::log(y) + (f.second - 1.0) * std::log1p(-y) -
                            log_beta(f.first, f.second)) /
                   f.support;
        }
    }
    return 0.0;
}

/// Inverse CDF by bisection over the support, run to full double resolution.
inline double quantile(const FittedApprox& f, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile: q must lie in (0, 1)");
    double lo = 0.0;
    double hi = 0.0;
    switch (f.family) {
        case Family::gaussian:
            lo = f.first - 40.0 * f.second;
            hi = f.first + 40.0 * f.second;
            break;
        case Family::gamma:
            hi = f.first * f.second + 10.0 * std::sqrt(f.first) * f.second;
            while (cdf(f, hi) < q) hi *= 2.0;
            break;
        case Family::beta: hi = f.support; break;
    }
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(f, mid) < q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// P(I > eps) under the fitted distribution.
inline double prob_exceeds(const FittedApprox& f, double eps) {
    return std::clamp(1.0 - cdf(f, eps), 0.0, 1.0);
}

}  // namespace mibayes
