#pragma once

// Mutual-information feature filters over (feature x class) tables:
//   F  : keep when the empirical MI exceeds eps
//   FF : keep when P(I > eps) >= p            (forward, needs evidence of relevance)
//   BF : drop when P(I <= eps) >= p           (backward, needs evidence of irrelevance)

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mibayes/contingency_table.hpp"
#include "mibayes/distribution.hpp"
#include "mibayes/errors.hpp"
#include "mibayes/log.hpp"
#include "mibayes/missing_data.hpp"
#include "mibayes/moments.hpp"

namespace mibayes {

enum class FilterKind { F, FF, BF };

inline std::string_view filter_name(FilterKind k) {
    switch (k) {
        case FilterKind::F: return "F";
        case FilterKind::FF: return "FF";
        case FilterKind::BF: return "BF";
    }
    return "F";
}

inline FilterKind parse_filter_kind(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "f") return FilterKind::F;
    if (lower == "ff") return FilterKind::FF;
    if (lower == "bf") return FilterKind::BF;
    throw InputError("unknown filter '" + std::string(s) + "' (expected f, ff or bf)");
}

inline constexpr double kDefaultEps = 0.003;
inline constexpr double kDefaultP = 0.95;

struct FilterConfig {
    FilterKind kind = FilterKind::FF;
    double eps = kDefaultEps;
    double p = kDefaultP;
    PriorSpec prior = PriorSpec::uniform();
    Family family = Family::beta;

    void validate() const {
        if (!(eps >= 0.0) || !std::isfinite(eps)) throw InputError("filter eps must be finite and >= 0");
        if (!(p > 0.5 && p < 1.0)) throw InputError("filter p must lie in (0.5, 1)");
    }
};

/// Defaults for eps and p, overridable through MIBAYES_EPS and MIBAYES_P.
inline FilterConfig default_filter_config(FilterKind kind) {
    FilterConfig cfg;
    cfg.kind = kind;
    auto read = [](const char* name, double fallback) {
        const char* v = std::getenv(name);
        if (v == nullptr || *v == '\0') return fallback;
        char* end = nullptr;
        const double x = std::strtod(v, &end);
        if (end == v || *end != '\0') throw InputError(std::string("cannot parse ") + name + "='" + v + "'");
        return x;
    };
    cfg.eps = read("MIBAYES_EPS", kDefaultEps);
    cfg.p = read("MIBAYES_P", kDefaultP);
    return cfg;
}

struct FeatureDecision {
    std::size_t feature = 0;
    bool included = false;
    double point_mi = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double exceedance = 0.0;  // P(I > eps) under the fitted posterior (F: 1 or 0)
    std::optional<Family> family_used;
    bool degenerate = false;
    bool fit_failed = false;
};

/// Feature-class table, optionally with margin-only counts of instances whose
/// feature value (column_margin_only, per class) or class (row_margin_only, per
/// feature value) was not observed.
struct FeatureTable {
    std::size_t feature = 0;
    ContingencyTable table;
    std::vector<double> row_margin_only{};
    std::vector<double> col_margin_only{};
};

namespace detail {

inline bool is_degenerate(const ContingencyTable& t) {
    std::size_t rows = 0, cols = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) rows += t.row_total(i) > 0.0;
    for (std::size_t j = 0; j < t.cols(); ++j) cols += t.col_total(j) > 0.0;
    return rows < 2 || cols < 2;
}

}  // namespace detail

/// Decision for one feature. `ft.table` holds posterior counts (prior included).
inline FeatureDecision decide(const FeatureTable& ft, const FilterConfig& cfg) {
    FeatureDecision d;
    d.feature = ft.feature;
    const auto& t = ft.table;
    if (t.rows() < 2 || t.cols() < 2 || detail::is_degenerate(t)) {
        d.degenerate = true;
        return d;
    }
    d.point_mi = empirical_mi(t);
    if (cfg.kind == FilterKind::F) {
        d.mean = d.point_mi;
        d.included = d.point_mi > cfg.eps;
        d.exceedance = d.included ? 1.0 : 0.0;
        return d;
    }
    const MomentSummary ms = moments_incomplete(t, ft.row_margin_only, ft.col_margin_only);
    d.mean = ms.mean;
    d.variance = ms.variance;
    try {
        const FittedApprox f = fit_with_fallback(ms, cfg.family);
        d.family_used = f.family;
        d.exceedance = prob_exceeds(f, cfg.eps);
    } catch (const FitError& e) {
        d.fit_failed = true;
        warn(std::string("feature ") + std::to_string(ft.feature) + ": " + e.what() + "; " +
             (cfg.kind == FilterKind::FF ? "FF excludes" : "BF includes"));
        d.included = cfg.kind == FilterKind::BF;
        d.exceedance = d.included ? 1.0 : 0.0;
        return d;
    }
    if (cfg.kind == FilterKind::FF) {
        d.included = d.exceedance >= cfg.p;
    } else {
        // discard when P(I <= eps) >= p, i.e. keep while P(I > eps) > 1 - p
        d.included = d.exceedance > 1.0 - cfg.p;
    }
    return d;
}

/// Per-feature decisions, in input order.
inline std::vector<FeatureDecision> decide_all(const std::vector<FeatureTable>& tables, const FilterConfig& cfg) {
    std::vector<FeatureDecision> out;
    out.reserve(tables.size());
    for (const auto& ft : tables) out.push_back(decide(ft, cfg));
    return out;
}

/// Ids of the included features, ascending.
inline std::vector<std::size_t> select(const std::vector<FeatureTable>& tables, const FilterConfig& cfg) {
    std::vector<std::size_t> ids;
    for (const auto& d : decide_all(tables, cfg))
        if (d.included) ids.push_back(d.feature);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace mibayes
