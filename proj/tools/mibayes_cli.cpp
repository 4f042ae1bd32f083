// mibayes: command-line front end for posterior mutual information, the
// feature filters, sequential evaluation and Monte Carlo checks.
//
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mibayes/mibayes.hpp"

namespace {

using nlohmann::ordered_json;
using namespace mibayes;

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

std::vector<double> parse_counts(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InputError("cannot parse count '" + item + "'");
        }
        if (used != item.size()) throw InputError("cannot parse count '" + item + "'");
        out.push_back(v);
    }
    return out;
}

ordered_json fit_json(const FittedApprox& f) {
    ordered_json j{{"family", family_name(f.family)}};
    switch (f.family) {
        case Family::gaussian: j["mean"] = f.first; j["sd"] = f.second; break;
        case Family::gamma: j["shape"] = f.first; j["scale"] = f.second; break;
        case Family::beta: j["a"] = f.first; j["b"] = f.second; j["support"] = f.support; break;
    }
    return j;
}

// Counts of one (feature, class) column pair, including partially observed rows.
struct PairCounts {
    std::vector<std::string> row_values, col_values;
    std::vector<double> joint;                  // row-major, grown on demand
    std::unordered_map<std::string, double> row_only, col_only;
    std::size_t both_missing = 0;

    std::size_t code(std::vector<std::string>& dict, const std::string& v) {
        for (std::size_t i = 0; i < dict.size(); ++i)
            if (dict[i] == v) return i;
        dict.push_back(v);
        return dict.size() - 1;
    }
};

PairCounts count_pair(const RawTable& raw, std::size_t fcol, std::size_t ccol, const std::string& missing) {
    PairCounts pc;
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (const auto& row : raw.rows) {
        const bool fm = row[fcol] == missing || row[fcol].empty();
        const bool cm = row[ccol] == missing || row[ccol].empty();
        if (fm && cm) {
            ++pc.both_missing;
        } else if (fm) {
            pc.code(pc.col_values, row[ccol]);
            pc.col_only[row[ccol]] += 1.0;
        } else if (cm) {
            pc.code(pc.row_values, row[fcol]);
            pc.row_only[row[fcol]] += 1.0;
        } else {
            cells.emplace_back(pc.code(pc.row_values, row[fcol]), pc.code(pc.col_values, row[ccol]));
        }
    }
    pc.joint.assign(pc.row_values.size() * pc.col_values.size(), 0.0);
    for (auto [i, j] : cells) pc.joint[i * pc.col_values.size() + j] += 1.0;
    return pc;
}

int cmd_mi(const std::string& file, const std::string& feature, std::string class_col, const std::string& prior_name,
           bool use_missing, const FilterConfig& cfg, const std::string& missing) {
    const RawTable raw = read_csv(file);
    const std::size_t fcol = raw.column_index(feature);
    const std::size_t ccol = class_col.empty() ? raw.header.size() - 1 : raw.column_index(class_col);
    if (fcol == ccol) throw InputError("feature and class column are the same");
    const PairCounts pc = count_pair(raw, fcol, ccol, missing);
    const std::size_t r = pc.row_values.size(), s = pc.col_values.size();
    if (r < 2 || s < 2) throw InputError("feature and class need at least two observed values each");
    const PriorSpec prior = parse_prior(prior_name);
    const ContingencyTable table = build_table(r, s, pc.joint, prior);

    std::vector<double> row_margin(r, 0.0), col_margin(s, 0.0);
    if (use_missing) {
        for (std::size_t i = 0; i < r; ++i)
            if (auto it = pc.row_only.find(pc.row_values[i]); it != pc.row_only.end()) row_margin[i] = it->second;
        for (std::size_t j = 0; j < s; ++j)
            if (auto it = pc.col_only.find(pc.col_values[j]); it != pc.col_only.end()) col_margin[j] = it->second;
    }
    const MomentSummary ms = moments_incomplete(table, row_margin, col_margin);
    const FittedApprox f = fit_with_fallback(ms, cfg.family);
    const double exceed = prob_exceeds(f, cfg.eps);

    double row_missing = 0.0, col_missing = 0.0;
    for (auto& [k, v] : pc.row_only) row_missing += v;
    for (auto& [k, v] : pc.col_only) col_missing += v;
    ordered_json j{{"feature", feature},
                   {"class", raw.header[ccol]},
                   {"prior", prior.name()},
                   {"rows", r},
                   {"cols", s},
                   {"total", table.total()},
                   {"i_max", ms.i_max},
                   {"empirical_mi", empirical_mi(table)},
                   {"mean", ms.mean},
                   {"variance", ms.variance},
                   {"leading_variance", ms.leading_variance},
                   {"variance_clamped", ms.variance_clamped},
                   {"missing_used", use_missing},
                   {"feature_missing", col_missing},
                   {"class_missing", row_missing},
                   {"both_missing_skipped", pc.both_missing},
                   {"fit", fit_json(f)},
                   {"eps", cfg.eps},
                   {"p", cfg.p},
                   {"exceedance", exceed},
                   {"ff_include", exceed >= cfg.p},
                   {"bf_include", exceed > 1.0 - cfg.p}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_filter(const std::string& file, const std::string& class_col, FilterConfig cfg, std::size_t bins,
               const std::string& missing) {
    const Dataset d = load_csv(file, class_col, missing, bins);
    std::vector<bool> seen(d.num_classes(), true);
    std::vector<FeatureClassCounts> stats;
    for (std::size_t k = 0; k < d.num_features(); ++k) stats.emplace_back(d.cardinality(k), d.num_classes());
    for (std::size_t n = 0; n < d.size(); ++n)
        for (std::size_t k = 0; k < d.num_features(); ++k) stats[k].add(d.instances[n][k], d.labels[n]);

    ordered_json decisions = ordered_json::array();
    ordered_json selected = ordered_json::array();
    for (std::size_t k = 0; k < d.num_features(); ++k) {
        auto table = stats[k].table(k, seen, cfg.prior);
        FeatureDecision dec;
        dec.feature = k;
        dec.degenerate = true;
        if (table) dec = decide(*table, cfg);
        if (dec.included) selected.push_back(d.feature_names[k]);
        decisions.push_back({{"feature", d.feature_names[k]},
                             {"included", dec.included},
                             {"degenerate", dec.degenerate},
                             {"point_mi", dec.point_mi},
                             {"mean", dec.mean},
                             {"variance", dec.variance},
                             {"exceedance", dec.exceedance}});
    }
    ordered_json j{{"kind", filter_name(cfg.kind)},
                   {"eps", cfg.eps},
                   {"p", cfg.p},
                   {"prior", cfg.prior.name()},
                   {"instances", d.size()},
                   {"dropped_missing_class", d.dropped_missing_class},
                   {"selected", selected},
                   {"decisions", decisions}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_evaluate(const std::string& file, const std::string& class_col, const std::string& filter_list,
                 std::optional<std::uint64_t> seed, const std::string& out_dir, const FilterConfig& base,
                 std::size_t bins, const std::string& missing) {
    Dataset d = load_csv(file, class_col, missing, bins);
    if (seed) shuffle_instances(d, *seed);
    std::vector<FilterConfig> configs;
    std::stringstream ss(filter_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        FilterConfig c = base;
        c.kind = parse_filter_kind(item);
        configs.push_back(c);
    }
    if (configs.empty()) throw InputError("no filters given");
    EvalTrace trace = [&] {
        ScopedWarningSink quiet(nullptr);
        return run_incremental(d, configs);
    }();
    trace.seed = seed;
    write_report(trace, out_dir);
    auto summary = summary_json(trace);
    summary["dropped_missing_class"] = d.dropped_missing_class;
    std::cout << summary.dump(2) << '\n';
    return 0;
}

ordered_json mc_check_json(const ContingencyTable& t, std::size_t samples, std::uint64_t seed) {
    const MomentSummary ms = moments(t);
    const McEnsemble e = mc_sample_mi(t, samples, seed);
    const double se = e.standard_error();
    ordered_json ks = ordered_json::object();
    for (Family f : {Family::gaussian, Family::gamma, Family::beta}) {
        try {
            ks[std::string(family_name(f))] = ks_distance(e, fit(ms, f));
        } catch (const FitError&) {
            ks[std::string(family_name(f))] = nullptr;
        }
    }
    const auto tails = tail_exponents(t.rows(), t.cols());
    ordered_json j{{"rows", t.rows()},
                   {"cols", t.cols()},
                   {"samples", samples},
                   {"seed", seed},
                   {"i_max", ms.i_max},
                   {"empirical_mi", empirical_mi(t)},
                   {"exact_mean", ms.mean},
                   {"approx_variance", ms.variance},
                   {"leading_variance", ms.leading_variance},
                   {"mc_mean", e.mean()},
                   {"mc_variance", e.variance()},
                   {"mc_standard_error", se},
                   {"mean_z", (ms.mean - e.mean()) / se},
                   {"variance_relative_error", (ms.variance - e.variance()) / e.variance()},
                   {"ks", ks},
                   {"tail_exponents", {{"lower", tails.lower}, {"upper", tails.upper}}}};
    try {
        j["mc_lower_tail_slope"] = lower_tail_slope(e);
    } catch (const DomainError&) {
        j["mc_lower_tail_slope"] = nullptr;
    }
    return j;
}

int cmd_mc_check(const std::string& counts_text, std::size_t rows, std::size_t samples, std::uint64_t seed) {
    const auto counts = parse_counts(counts_text);
    if (rows < 2 || counts.size() % rows != 0 || counts.size() / rows < 2) {
        throw InputError("counts must form a rows x cols table with rows, cols >= 2");
    }
    const ContingencyTable t(rows, counts.size() / rows, counts);
    std::cout << mc_check_json(t, samples, seed).dump(2) << '\n';
    return 0;
}

int cmd_overlay(const std::string& out_dir, std::size_t samples, std::uint64_t seed) {
    const std::vector<std::vector<double>> vectors = {{40, 10, 20, 80}, {20, 5, 10, 40}, {8, 2, 4, 16}};
    std::filesystem::create_directories(out_dir);
    ordered_json summary = ordered_json::array();
    for (const auto& v : vectors) {
        const ContingencyTable t(2, 2, v);
        const McEnsemble e = mc_sample_mi(t, samples, seed);
        std::string tag = std::to_string(int(v[0])) + "_" + std::to_string(int(v[1])) + "_" +
                          std::to_string(int(v[2])) + "_" + std::to_string(int(v[3]));
        const auto path = std::filesystem::path(out_dir) / ("overlay_" + tag + ".csv");
        std::ofstream out(path);
        if (!out) throw InputError("cannot write '" + path.string() + "'");
        write_density_overlay(t, e, out);
        auto j = mc_check_json(t, samples, seed);
        j["counts"] = v;
        j["csv"] = path.string();
        summary.push_back(std::move(j));
    }
    std::ofstream js(std::filesystem::path(out_dir) / "overlay_summary.json");
    js << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Posterior mutual information, robust feature filters and sequential naive Bayes evaluation"};
    app.require_subcommand(1);

    FilterConfig defaults;
    try {
        defaults = default_filter_config(FilterKind::FF);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    std::string missing = "?";
    app.add_option("--missing-token", missing, "Token marking a missing cell")->capture_default_str();

    // mi
    auto* mi = app.add_subcommand("mi", "Posterior mean, variance and exceedance for one feature/class pair");
    std::string mi_file, mi_feature, mi_class, mi_prior = "uniform", mi_family = "beta";
    bool mi_missing = false;
    double mi_eps = defaults.eps, mi_p = defaults.p;
    mi->add_option("file", mi_file, "CSV file")->required();
    mi->add_option("--feature", mi_feature, "Feature column")->required();
    mi->add_option("--class", mi_class, "Class column (default: last)");
    mi->add_option("--prior", mi_prior, "uniform|jeffreys|haldane|perks")->capture_default_str();
    mi->add_flag("--missing", mi_missing, "Use partially observed rows");
    mi->add_option("--eps", mi_eps, "Dependency threshold (nats)")->capture_default_str();
    mi->add_option("--p", mi_p, "Posterior probability level")->capture_default_str();
    mi->add_option("--family", mi_family, "beta|gamma|gaussian")->capture_default_str();

    // filter
    auto* flt = app.add_subcommand("filter", "Select features with F, FF or BF");
    std::string flt_file, flt_class, flt_kind = "ff", flt_prior = "uniform";
    double flt_eps = defaults.eps, flt_p = defaults.p;
    std::size_t flt_bins = 0;
    flt->add_option("file", flt_file, "CSV file")->required();
    flt->add_option("--class", flt_class, "Class column (default: last)");
    flt->add_option("--kind", flt_kind, "f|ff|bf")->capture_default_str();
    flt->add_option("--eps", flt_eps, "Dependency threshold (nats)")->capture_default_str();
    flt->add_option("--p", flt_p, "Posterior probability level")->capture_default_str();
    flt->add_option("--prior", flt_prior, "uniform|jeffreys|haldane|perks")->capture_default_str();
    flt->add_option("--discretize", flt_bins, "Equal-frequency bins for numeric columns (0 = off)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Sequential naive Bayes evaluation of several filters");
    std::string ev_file, ev_class, ev_filters = "f,ff,bf", ev_out = "out", ev_prior = "uniform";
    std::uint64_t ev_seed = 0;
    double ev_eps = defaults.eps, ev_p = defaults.p;
    std::size_t ev_bins = 0;
    ev->add_option("file", ev_file, "CSV file")->required();
    ev->add_option("--class", ev_class, "Class column (default: last)");
    ev->add_option("--filters", ev_filters, "Comma-separated list of f, ff, bf")->capture_default_str();
    auto* ev_seed_opt = ev->add_option("--seed", ev_seed, "Shuffle instances with this seed (default: file order)");
    ev->add_option("--out", ev_out, "Output directory")->capture_default_str();
    ev->add_option("--eps", ev_eps, "Dependency threshold (nats)")->capture_default_str();
    ev->add_option("--p", ev_p, "Posterior probability level")->capture_default_str();
    ev->add_option("--prior", ev_prior, "uniform|jeffreys|haldane|perks")->capture_default_str();
    ev->add_option("--discretize", ev_bins, "Equal-frequency bins for numeric columns (0 = off)");

    // mc-check
    auto* mc = app.add_subcommand("mc-check", "Compare the analytic moments and fits with Dirichlet Monte Carlo");
    std::string mc_counts;
    std::size_t mc_rows = 2, mc_samples = 100000;
    std::uint64_t mc_seed = 1;
    mc->add_option("counts", mc_counts, "Comma-separated posterior counts, row-major")->required();
    mc->add_option("--rows", mc_rows, "Number of table rows")->capture_default_str();
    mc->add_option("--samples", mc_samples, "Monte Carlo sample count")->capture_default_str();
    mc->add_option("--seed", mc_seed, "PRNG seed")->capture_default_str();

    // overlay
    auto* fg = app.add_subcommand("overlay", "Density overlays for the three reference 2x2 count vectors");
    std::string fg_out = "overlay";
    std::size_t fg_samples = 100000;
    std::uint64_t fg_seed = 1;
    fg->add_option("--out", fg_out, "Output directory")->capture_default_str();
    fg->add_option("--samples", fg_samples, "Monte Carlo sample count")->capture_default_str();
    fg->add_option("--seed", fg_seed, "PRNG seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (*mi) {
            FilterConfig cfg = defaults;
            cfg.eps = mi_eps;
            cfg.p = mi_p;
            cfg.family = parse_family(mi_family);
            cfg.validate();
            return cmd_mi(mi_file, mi_feature, mi_class, mi_prior, mi_missing, cfg, missing);
        }
        if (*flt) {
            FilterConfig cfg = defaults;
            cfg.kind = parse_filter_kind(flt_kind);
            cfg.eps = flt_eps;
            cfg.p = flt_p;
            cfg.prior = parse_prior(flt_prior);
            cfg.validate();
            return cmd_filter(flt_file, flt_class, cfg, flt_bins, missing);
        }
        if (*ev) {
            FilterConfig cfg = defaults;
            cfg.eps = ev_eps;
            cfg.p = ev_p;
            cfg.prior = parse_prior(ev_prior);
            cfg.validate();
            std::optional<std::uint64_t> seed;
            if (ev_seed_opt->count() > 0) seed = ev_seed;
            return cmd_evaluate(ev_file, ev_class, ev_filters, seed, ev_out, cfg, ev_bins, missing);
        }
        if (*mc) return cmd_mc_check(mc_counts, mc_rows, mc_samples, mc_seed);
        if (*fg) return cmd_overlay(fg_out, fg_samples, fg_seed);
    } catch (const FitError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
