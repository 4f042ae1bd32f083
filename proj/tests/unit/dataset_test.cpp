#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "mibayes/dataset.hpp"

using namespace mibayes;

namespace {
const std::string kData = MIBAYES_TEST_DATA;
}

TEST(Csv, ParsesQuotesAndBom) {
    std::istringstream in("\xEF\xBB\xBF" "a,b,c\n1,\"x, y\",\"say \"\"hi\"\"\"\r\n\n2, z ,w\n");
    const auto t = parse_csv(in);
    EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][1], "x, y");
    EXPECT_EQ(t.rows[0][2], "say \"hi\"");
    EXPECT_EQ(t.rows[1][1], "z");
    EXPECT_EQ(t.column_index("c"), 2u);
    EXPECT_THROW(t.column_index("d"), InputError);
}

TEST(Csv, Errors) {
    std::istringstream empty("");
    EXPECT_THROW(parse_csv(empty), InputError);
    std::istringstream one("a\n1\n");
    EXPECT_THROW(parse_csv(one), InputError);
    try {
        read_csv(kData + "/ragged.csv");
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    }
    EXPECT_THROW(read_csv(kData + "/does_not_exist.csv"), InputError);
}

TEST(Dataset, WeatherCoding) {
    const auto d = load_csv(kData + "/weather.csv");
    EXPECT_EQ(d.size(), 14u);
    EXPECT_EQ(d.num_features(), 4u);
    EXPECT_EQ(d.class_name, "play");
    EXPECT_EQ(d.class_values, (std::vector<std::string>{"no", "yes"}));
    EXPECT_EQ(d.feature_values[0], (std::vector<std::string>{"sunny", "overcast", "rainy"}));
    EXPECT_EQ(d.cardinalities(), (std::vector<std::size_t>{3, 3, 2, 2}));
    EXPECT_EQ(d.instances[2], (std::vector<ValueCode>{1, 0, 0, 0}));
    EXPECT_EQ(std::count(d.labels.begin(), d.labels.end(), 1u), 9);
    EXPECT_EQ(d.name, "weather.csv");
}

TEST(Dataset, MissingTokens) {
    const auto d = load_csv(kData + "/weather_missing.csv");
    EXPECT_EQ(d.instances[1][0], kMissing);
    EXPECT_EQ(d.instances[4][0], kMissing);
    EXPECT_EQ(d.cardinality(0), 3u);

    const auto both = load_csv(kData + "/weather_both_missing.csv");
    EXPECT_EQ(both.dropped_missing_class, 1u);
    EXPECT_EQ(both.size(), 13u);

    const auto by_name = load_csv(kData + "/weather.csv", "outlook");
    EXPECT_EQ(by_name.class_name, "outlook");
    EXPECT_EQ(by_name.num_classes(), 3u);
}

TEST(Binning, EqualFrequencyBoundaries) {
    const std::vector<double> x{3.1, 0.5, 2.2, 7.7, 5.0, 5.0, 1.1, 9.3, 4.4, 6.6,
                                2.2, 8.8, 0.9, 3.3, 5.5, 7.1, 2.8, 4.0, 6.0, 1.7};
    const auto b4 = bin_numeric(x, 4);
    EXPECT_EQ(b4.boundaries, (std::vector<double>{2.2, 4.0, 6.0}));
    const auto b5 = bin_numeric(x, 5);
    EXPECT_EQ(b5.boundaries, (std::vector<double>{1.7, 3.1, 5.0, 6.6}));
    // ties sit in the lower bin
    EXPECT_EQ(b4.bin[2], 0u);
    EXPECT_EQ(b4.bin[17], 1u);
    EXPECT_EQ(b4.bin[7], 3u);
    std::vector<std::size_t> sizes(4, 0);
    for (auto v : b4.bin) ++sizes[v];
    EXPECT_EQ(sizes, (std::vector<std::size_t>{6, 4, 5, 5}));
}

TEST(Binning, DuplicatesCollapseAndConstantWarns) {
    std::vector<std::string> warnings;
    ScopedWarningSink sink([&](std::string_view m) { warnings.emplace_back(m); });
    const std::vector<double> c(10, 2.5);
    const auto b = bin_numeric(c, 4);
    EXPECT_EQ(b.bins(), 1u);
    EXPECT_EQ(warnings.size(), 1u);
    const std::vector<double> skew{1, 1, 1, 1, 1, 1, 1, 2, 3, 4};
    EXPECT_EQ(bin_numeric(skew, 5).boundaries, (std::vector<double>{1, 2}));
}

TEST(Binning, DiscretizesOnlyManyValuedNumericColumns) {
    std::ostringstream csv;
    csv << "x,y,z,cls\n";
    for (int i = 0; i < 30; ++i) csv << i * 0.5 << ',' << (i % 3) << ",t" << i % 2 << ',' << (i < 15 ? "a" : "b") << '\n';
    csv << "?,1,t0,a\n";
    std::istringstream in(csv.str());
    auto raw = parse_csv(in);
    const auto binned = discretize_numeric_columns(raw, 5, 3);
    EXPECT_EQ(binned, (std::vector<std::string>{"x"}));
    EXPECT_EQ(raw.rows[0][0], "b0");
    EXPECT_EQ(raw.rows[29][0], "b4");
    EXPECT_EQ(raw.rows[30][0], "?");
    EXPECT_EQ(raw.rows[0][1], "0");
}

TEST(Shuffle, SeededPermutationKeepsPairs) {
    auto a = load_csv(kData + "/weather.csv");
    auto b = a;
    const auto original = a;
    shuffle_instances(a, 7);
    shuffle_instances(b, 7);
    EXPECT_EQ(a.instances, b.instances);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_NE(a.instances, original.instances);
    // every (instance, label) pair survives
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < original.size() && !found; ++j)
            found = original.instances[j] == a.instances[i] && original.labels[j] == a.labels[i];
        EXPECT_TRUE(found);
    }
    auto c = original;
    shuffle_instances(c, 8);
    EXPECT_NE(c.instances, a.instances);
}
