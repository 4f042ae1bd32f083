#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "missing_sampler.hpp"
#include "mibayes/missing_data.hpp"

using namespace mibayes;

namespace {
ContingencyTable random_table(std::mt19937_64& gen, std::size_t& r, std::size_t& s) {
    std::uniform_int_distribution<int> dim(2, 4), cnt(1, 25);
    r = dim(gen);
    s = dim(gen);
    std::vector<double> c(r * s);
    for (auto& v : c) v = cnt(gen);
    return {r, s, c};
}
}  // namespace

TEST(MissingData, CompleteSampleReducesToLeadingTerm) {
    std::mt19937_64 gen(3);
    for (int k = 0; k < 200; ++k) {
        std::size_t r, s;
        const auto t = random_table(gen, r, s);
        const AugmentedTable a(t, std::vector<double>(r, 0.0));
        const auto terms = variance_terms(t);
        EXPECT_NEAR(mi_variance_missing(a), (terms.K - terms.J * terms.J) / t.total(), 1e-12);
        EXPECT_NEAR(mi_mean_missing(a), empirical_mi(t), 1e-12);
    }
}

TEST(MissingData, MarginProportionalToRowsLeavesMeanUnchanged) {
    ContingencyTable t(2, 3, {10, 4, 6, 2, 9, 9});
    // n_i? proportional to n_i+ keeps pi_hat equal to the complete-case frequencies
    const AugmentedTable a(t, {5.0, 5.0});
    EXPECT_NEAR(mi_mean_missing(a), empirical_mi(t), 1e-13);
}

TEST(MissingData, IndependentTableGivesZero) {
    ContingencyTable t(2, 2, {6, 3, 4, 2});
    const AugmentedTable a(t, {7.0, 1.0});
    EXPECT_NEAR(mi_mean_missing(a), 0.0, 1e-14);
    EXPECT_NEAR(mi_variance_missing(a), 0.0, 1e-14);
}

TEST(MissingData, ReferenceMean) {
    // hand evaluation of the plug-in formula with rows reweighted to (150, 100) / 250
    ContingencyTable t(2, 2, {40, 10, 20, 80});
    EXPECT_NEAR(mi_mean_missing(AugmentedTable(t, {100.0, 0.0})), 0.185527376714185, 1e-12);
}

TEST(MissingData, ZeroMarginOnlyRowIsFinite) {
    ContingencyTable t(3, 2, {8, 2, 3, 9, 5, 5});
    const AugmentedTable a(t, {4.0, 0.0, 2.0});
    const auto terms = missing_data_terms(a);
    EXPECT_TRUE(std::isfinite(terms.P));
    EXPECT_TRUE(std::isfinite(terms.Q));
    EXPECT_GT(mi_variance_missing(a), 0.0);
}

TEST(MissingData, VarianceDropsWhenMarginCountsBecomeJoint) {
    // moving a partially observed instance into the joint table adds information
    ContingencyTable base(2, 2, {20, 5, 10, 40});
    const double v0 = mi_variance_missing(AugmentedTable(base, {10.0, 20.0}));
    ContingencyTable more(2, 2, {28, 7, 10, 40});
    const double v1 = mi_variance_missing(AugmentedTable(more, {0.0, 20.0}));
    ContingencyTable all(2, 2, {28, 7, 14, 56});
    const double v2 = mi_variance_missing(AugmentedTable(all, {0.0, 0.0}));
    EXPECT_GT(v0, v1);
    EXPECT_GT(v1, v2);
}

TEST(MissingData, TransposeSymmetryOfClassVariant) {
    ContingencyTable t(3, 2, {8, 2, 3, 9, 5, 5});
    const auto ms = mi_moments_missing_class(t, {4.0, 6.0});
    const auto direct = moments_missing(AugmentedTable(t.transposed(), {4.0, 6.0}));
    EXPECT_DOUBLE_EQ(ms.mean, direct.mean);
    EXPECT_DOUBLE_EQ(ms.variance, direct.variance);
}

TEST(MissingData, IncompleteDispatch) {
    ContingencyTable t(2, 2, {20, 5, 10, 40});
    const auto none = moments_incomplete(t, {0, 0}, {0, 0});
    EXPECT_DOUBLE_EQ(none.mean, mi_mean_exact(t));
    const auto rows = moments_incomplete(t, {10, 20}, {});
    EXPECT_DOUBLE_EQ(rows.variance, mi_variance_missing(AugmentedTable(t, {10, 20})));
    try {
        moments_incomplete(t, {1, 0}, {0, 1});
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("EM"), std::string::npos);
    }
}

TEST(MissingData, RejectsMarginWithoutJointCounts) {
    EXPECT_THROW(AugmentedTable(ContingencyTable(2, 2, {3, 2, 0, 0}), {0.0, 4.0}), DomainError);
    EXPECT_THROW(AugmentedTable(ContingencyTable(2, 2, {3, 2, 1, 1}), {0.0}), DomainError);
}

TEST(MissingData, ApproachesExactPosteriorAsSampleGrows) {
    // the expansion is leading order: the error against the exact posterior
    // should roughly halve each time all counts double
    std::vector<double> rel;
    for (double lambda : {1.0, 2.0, 4.0}) {
        const std::vector<double> c{20 * lambda, 5 * lambda, 10 * lambda, 40 * lambda};
        const std::vector<double> m{10 * lambda, 20 * lambda};
        const auto exact = oracle::missing_row_posterior_mi(c, 2, 2, m, 400'000, 1234);
        const double approx = mi_variance_missing(AugmentedTable(ContingencyTable(2, 2, c), m));
        rel.push_back(std::fabs(approx - exact.variance) / exact.variance);
    }
    EXPECT_LT(rel[0], 0.08);
    EXPECT_LT(rel[1], rel[0]);
    EXPECT_LT(rel[2], rel[1]);
}
