#pragma once

// Output writers: JSON run summary, per-instance CSV for accuracy and
// attribute-count curves, and the density overlay of MC vs fitted curves.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mibayes/distribution.hpp"
#include "mibayes/harness.hpp"
#include "mibayes/monte_carlo.hpp"

namespace mibayes {

inline nlohmann::ordered_json summary_json(const EvalTrace& trace) {
    if (trace.filters.empty() || trace.instances == 0) throw InputError("report: empty trace");
    nlohmann::ordered_json j;
    j["dataset"] = trace.dataset;
    j["instances"] = trace.instances;
    j["features"] = trace.features;
    j["seed"] = trace.seed ? nlohmann::ordered_json(*trace.seed) : nlohmann::ordered_json(nullptr);
    auto& filters = j["filters"] = nlohmann::ordered_json::array();
    for (const auto& f : trace.filters) {
        filters.push_back({{"name", filter_name(f.config.kind)},
                           {"eps", f.config.eps},
                           {"p", f.config.p},
                           {"prior", f.config.prior.name()},
                           {"family", family_name(f.config.family)},
                           {"final_accuracy", f.final_accuracy()},
                           {"average_selected", f.average_selected()}});
    }
    auto& cmp = j["comparisons"] = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < trace.filters.size(); ++a) {
        for (std::size_t b = a + 1; b < trace.filters.size(); ++b) {
            const auto& fa = trace.filters[a];
            const auto& fb = trace.filters[b];
            auto ranges = nlohmann::ordered_json::array();
            for (auto [lo, hi] : significance_ranges(fa, fb)) ranges.push_back({lo, hi});
            std::vector<double> ca(fa.correct.begin(), fa.correct.end());
            std::vector<double> cb(fb.correct.begin(), fb.correct.end());
            const auto last = paired_ttest(ca, cb);
            cmp.push_back({{"a", filter_name(fa.config.kind)},
                           {"b", filter_name(fb.config.kind)},
                           {"final_t", std::isfinite(last.t) ? nlohmann::ordered_json(last.t)
                                                             : nlohmann::ordered_json(last.t > 0 ? "inf" : "-inf")},
                           {"final_significant", last.significant},
                           {"significant_ranges", std::move(ranges)}});
        }
    }
    return j;
}

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace detail

/// Per-instance CSV: k, then for each filter <name>_correct, <name>_accuracy, <name>_selected.
inline void write_trace_csv(const EvalTrace& trace, std::ostream& out) {
    if (trace.filters.empty() || trace.instances == 0) throw InputError("report: empty trace");
    out << "k";
    for (const auto& f : trace.filters) {
        const auto name = filter_name(f.config.kind);
        out << ',' << name << "_correct," << name << "_accuracy," << name << "_selected";
    }
    out << '\n';
    for (std::size_t k = 0; k < trace.instances; ++k) {
        out << k + 1;
        for (const auto& f : trace.filters) {
            out << ',' << int(f.correct[k]) << ',' << detail::format_double(f.cumulative_accuracy[k]) << ','
                << f.selected[k];
        }
        out << '\n';
    }
}

/// Writes summary.json and trace.csv into `dir` (created if absent).
inline void write_report(const EvalTrace& trace, const std::filesystem::path& dir) {
    const auto summary = summary_json(trace);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto js = detail::open_for_write(dir / "summary.json");
    js << summary.dump(2) << '\n';
    auto csv = detail::open_for_write(dir / "trace.csv");
    write_trace_csv(trace, csv);
    if (!js || !csv) throw InputError("failed writing report to '" + dir.string() + "'");
}

/// Density overlay on a grid over [0, I_max]: MC histogram density and the
/// three moment-matched densities. Columns: percent_of_imax, i, mc_density,
/// gaussian, gamma, beta (a family that cannot be fitted is left empty).
inline void write_density_overlay(const ContingencyTable& t, const McEnsemble& e, std::ostream& out,
                                  std::size_t grid = 200) {
    const MomentSummary ms = moments(t);
    const double i_max = t.i_max();
    std::vector<std::optional<FittedApprox>> fits;
    for (Family f : {Family::gaussian, Family::gamma, Family::beta}) {
        try {
            fits.emplace_back(fit(ms, f));
        } catch (const FitError&) {
            fits.emplace_back(std::nullopt);
        }
    }
    const double width = i_max / static_cast<double>(grid);
    std::vector<double> hist(grid, 0.0);
    for (double x : e.samples) hist[std::min(grid - 1, static_cast<std::size_t>(x / width))] += 1.0;
    out << "percent_of_imax,i,mc_density,gaussian,gamma,beta\n";
    for (std::size_t b = 0; b < grid; ++b) {
        const double x = (static_cast<double>(b) + 0.5) * width;
        out << detail::format_double(100.0 * x / i_max) << ',' << detail::format_double(x) << ','
            << detail::format_double(hist[b] / (static_cast<double>(e.samples.size()) * width));
        for (const auto& f : fits) {
            out << ',';
            if (f) out << detail::format_double(pdf(*f, x));
        }
        out << '\n';
    }
}

}  // namespace mibayes
