// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dirichlet_quadrature.hpp"
#include "synthetic.hpp"
#include "mibayes/mibayes.hpp"

using namespace mibayes;
using Clock = std::chrono::steady_clock;

namespace {

const std::array<std::array<double, 4>, 3> kVectors{{{40, 10, 20, 80}, {20, 5, 10, 40}, {8, 2, 4, 16}}};

ContingencyTable table(const std::array<double, 4>& n) { return {2, 2, {n[0], n[1], n[2], n[3]}}; }

std::string label(const std::array<double, 4>& n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%g,%g,%g,%g)", n[0], n[1], n[2], n[3]);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [violated]");
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome exact_mean() {
    Outcome o;
    const auto t0 = Clock::now();
    for (const auto& n : kVectors) {
        const auto e = mc_sample_mi(table(n), 1'000'000, 1001);
        const double diff = std::fabs(mi_mean_exact(table(n)) - e.mean());
        o.check(diff < 3.0 * e.standard_error(),
                label(n) + fmt(" |dmean|=%.2e (%.2f SE)", diff, diff / e.standard_error()));
    }
    const double secs = seconds_since(t0);
    o.check(secs < 60.0, fmt("%.1f s", secs));
    return o;
}

Outcome variance_quality() {
    Outcome o;
    for (const auto& n : kVectors) {
        const auto e = mc_sample_mi(table(n), 1'000'000, 2002);
        const double rel = std::fabs(mi_variance_approx(table(n)).variance - e.variance()) / e.variance();
        o.check(rel < 0.05, label(n) + fmt(" rel=%.2e", rel));
    }
    // the scaled family's errors are below MC resolution; compare against quadrature
    std::vector<double> rel;
    for (double lambda : {1.0, 2.0, 4.0}) {
        const std::array<double, 4> n{40 * lambda, 10 * lambda, 20 * lambda, 80 * lambda};
        const double exact = oracle::dirichlet_2x2_mi_moments(n, 100).variance;
        rel.push_back(std::fabs(mi_variance_approx(table(n)).variance - exact) / exact);
    }
    for (std::size_t k = 1; k < rel.size(); ++k) {
        const double ratio = rel[k - 1] / rel[k];
        o.check(ratio >= 2.0 && ratio <= 8.0, fmt("ratio %.0f->%.0f = %.2f", std::pow(2.0, k - 1.0), std::pow(2.0, k), ratio));
    }
    return o;
}

Outcome distribution_fit() {
    Outcome o;
    for (const auto& n : kVectors) {
        const auto t = table(n);
        const auto e = mc_sample_mi(t, 100'000, 3003);
        const auto ms = moments(t);
        const double beta = ks_distance(e, fit(ms, Family::beta));
        const double gauss = ks_distance(e, fit(ms, Family::gaussian));
        const double gam = ks_distance(e, fit(ms, Family::gamma));
        o.check(beta < 0.05, label(n) + fmt(" KS beta=%.4f gaussian=%.4f gamma=%.4f", beta, gauss, gam));
    }
    return o;
}

Outcome tail_exponent() {
    Outcome o;
    const auto e = mc_sample_mi(ContingencyTable(2, 2, {3, 3, 3, 3}), 1'000'000, 4004);
    const double slope = lower_tail_slope(e);
    const double target = tail_exponents(2, 2).lower;
    o.check(std::fabs(slope - target) <= 0.2, fmt("slope %.3f vs %.3f", slope, target));
    return o;
}

Outcome missing_reduction() {
    Outcome o;
    std::mt19937_64 gen(5005);
    std::uniform_int_distribution<int> dim(2, 6), cnt(0, 50);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const std::size_t r = dim(gen), s = dim(gen);
        std::vector<double> c(r * s);
        for (auto& v : c) v = cnt(gen) + 0.5;
        const ContingencyTable t(r, s, c);
        const auto terms = variance_terms(t);
        const double want = (terms.K - terms.J * terms.J) / t.total();
        worst = std::max(worst, std::fabs(mi_variance_missing(AugmentedTable(t, std::vector<double>(r, 0.0))) - want));
    }
    o.check(worst <= 1e-12, fmt("max |diff| = %.1e over 500 tables", worst));
    return o;
}

Outcome filter_theorems() {
    Outcome o;
    ScopedWarningSink quiet(nullptr);
    std::mt19937_64 gen(6006);
    std::uniform_int_distribution<int> dim(2, 5), cnt(0, 30), boost(0, 40);
    const std::vector<double> eps_grid{0.0, 0.001, 0.003, 0.01, 0.03, 0.1, 0.3};
    std::size_t subset_violations = 0, monotone_violations = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t r = dim(gen), s = dim(gen);
        std::vector<double> c(r * s);
        const int b = boost(gen);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < s; ++j) c[i * s + j] = cnt(gen) + (i % s == j ? b : 0);
        const FeatureTable ft{0, build_table(r, s, c, PriorSpec::uniform())};
        bool prev_ff = true, prev_bf = true;
        for (double eps : eps_grid) {
            FilterConfig cfg;
            cfg.eps = eps;
            cfg.p = 0.95;
            cfg.kind = FilterKind::FF;
            const bool ff = decide(ft, cfg).included;
            cfg.kind = FilterKind::BF;
            const bool bf = decide(ft, cfg).included;
            subset_violations += ff && !bf;
            monotone_violations += (ff && !prev_ff) + (bf && !prev_bf);
            prev_ff = ff;
            prev_bf = bf;
        }
    }
    o.check(subset_violations == 0, "FF not subset of BF: " + std::to_string(subset_violations));
    o.check(monotone_violations == 0, "non-monotone in eps: " + std::to_string(monotone_violations));
    return o;
}

Outcome harness_behavior() {
    Outcome o;
    ScopedWarningSink quiet(nullptr);
    const auto t0 = Clock::now();
    const auto d = oracle::make_synthetic(oracle::SyntheticSpec{});
    std::vector<FilterConfig> cfgs(3);
    cfgs[0].kind = FilterKind::FF;
    cfgs[1].kind = FilterKind::F;
    cfgs[2].kind = FilterKind::BF;
    const auto trace = run_incremental(d, cfgs);
    const auto& ff = trace.filters[0];
    const auto& f = trace.filters[1];
    const auto& bf = trace.filters[2];
    o.check(ff.average_selected() < f.average_selected() && f.average_selected() < bf.average_selected(),
            fmt("avg selected FF %.2f < F %.2f < BF %.2f", ff.average_selected(), f.average_selected(),
                bf.average_selected()));
    o.check(ff.final_accuracy() >= f.final_accuracy() - 0.01,
            fmt("accuracy FF %.4f F %.4f BF %.4f", ff.final_accuracy(), f.final_accuracy(), bf.final_accuracy()));
    const double secs = seconds_since(t0);
    o.check(secs < 120.0, fmt("%.2f s", secs));
    return o;
}

Outcome naive_bayes_equivalence() {
    Outcome o;
    std::mt19937_64 gen(8008);
    const std::vector<std::size_t> card{2, 3, 4, 3, 5};
    const std::size_t classes = 3;
    auto draw = [&] {
        std::vector<ValueCode> x(card.size());
        const std::size_t y = gen() % classes;
        for (std::size_t k = 0; k < card.size(); ++k)
            x[k] = gen() % 8 == 0 ? kMissing : static_cast<ValueCode>((gen() % 2 ? y : gen()) % card[k]);
        return std::pair{x, y};
    };
    std::vector<std::vector<ValueCode>> xs;
    std::vector<std::size_t> ys;
    CountsModel incremental(classes, card);
    for (int n = 0; n < 100; ++n) {
        auto [x, y] = draw();
        incremental.update(x, y);
        xs.push_back(x);
        ys.push_back(y);
    }
    // batch: counts rebuilt from scratch over the stored instances
    std::vector<std::vector<std::vector<double>>> nv(card.size());
    std::vector<std::vector<double>> nk(card.size(), std::vector<double>(classes, 0.0));
    std::vector<double> nc(classes, 0.0);
    for (std::size_t k = 0; k < card.size(); ++k) nv[k].assign(card[k], std::vector<double>(classes, 0.0));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        nc[ys[i]] += 1;
        for (std::size_t k = 0; k < card.size(); ++k)
            if (xs[i][k] != kMissing) {
                nv[k][xs[i][k]][ys[i]] += 1;
                nk[k][ys[i]] += 1;
            }
    }
    const std::vector<std::size_t> sel{0, 1, 2, 3, 4};
    std::size_t mismatches = 0;
    for (int h = 0; h < 100; ++h) {
        auto [x, y] = draw();
        std::size_t best = 0;
        double best_score = -INFINITY;
        for (std::size_t c = 0; c < classes; ++c) {
            double s = std::log((nc[c] + 1) / (100.0 + classes));
            for (auto k : sel)
                if (x[k] != kMissing) s += std::log((nv[k][x[k]][c] + 1) / (nk[k][c] + card[k]));
            if (s > best_score) {
                best_score = s;
                best = c;
            }
        }
        mismatches += incremental.predict(x, sel).label != best;
    }
    o.check(mismatches == 0, "mismatches " + std::to_string(mismatches) + " of 100 held-out instances");
    return o;
}

Outcome ttest_oracle() {
    Outcome o;
    struct Fixture {
        std::vector<double> a, b;
        double t;
        bool significant;
    };
    // t statistics from scipy.stats.ttest_rel
    const std::vector<Fixture> fixtures{
        {{1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1},
         {1, 1, 0, 1, 0, 1, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0},
         1.4093620435725565, false},
        {{1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 1},
         {1, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 0, 0, 0, 0, 1, 1},
         1.7950549357115013, false},
        {{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 1, 1},
         {1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0},
         5.037360419902471, true},
    };
    for (const auto& fx : fixtures) {
        const auto r = paired_ttest(fx.a, fx.b);
        o.check(std::fabs(r.t - fx.t) <= 1e-9 && r.significant == fx.significant,
                fmt("t=%.12f p=%.3g", r.t, r.p_value));
    }
    return o;
}

Outcome performance() {
    Outcome o;
    std::mt19937_64 gen(1010);
    std::uniform_int_distribution<int> cnt(0, 20);
    std::vector<double> c(100 * 100);
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 0; j < 100; ++j) c[i * 100 + j] = cnt(gen) + (i == j ? 200 : 0);
    const auto t = build_table(100, 100, c, PriorSpec::uniform());
    std::vector<double> times;
    double sink = 0.0;
    for (int rep = 0; rep < 21; ++rep) {
        const auto t0 = Clock::now();
        const auto ms = moments(t);
        sink += prob_exceeds(fit(ms, Family::beta), kDefaultEps);
        times.push_back(seconds_since(t0) * 1e3);
    }
    std::sort(times.begin(), times.end());
    o.check(times[10] < 10.0 && std::isfinite(sink), fmt("median %.3f ms, max %.3f ms", times[10], times.back()));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 exact mean vs Monte Carlo", exact_mean},
        {"2 variance approximation", variance_quality},
        {"3 beta fit KS distance", distribution_fit},
        {"4 lower tail exponent", tail_exponent},
        {"5 missing-data reduction", missing_reduction},
        {"6 filter subset and monotonicity", filter_theorems},
        {"7 harness feature counts and accuracy", harness_behavior},
        {"8 naive Bayes incremental vs batch", naive_bayes_equivalence},
        {"9 paired t-test fixtures", ttest_oracle},
        {"10 100x100 table under 10 ms", performance},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
