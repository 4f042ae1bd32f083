#pragma once

// CSV ingestion of nominal data, equal-frequency binning of numeric columns,
// and the seeded instance shuffle used before sequential evaluation.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mibayes/errors.hpp"
#include "mibayes/log.hpp"
#include "mibayes/naive_bayes.hpp"
#include "mibayes/random.hpp"

namespace mibayes {

/// Header plus string cells, as read from disk.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(std::string_view name) const {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        throw InputError("column '" + std::string(name) + "' not found in header");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record; double quotes group fields and "" escapes a quote.
inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
            was_quoted = true;
        } else if (ch == ',') {
            out.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else {
            field += ch;
        }
    }
    if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quoted field");
    out.push_back(was_quoted ? field : trim(field));
    return out;
}

inline std::optional<double> parse_number(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto* begin = s.data();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace detail

inline RawTable parse_csv(std::istream& in) {
    RawTable t;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv_line(line, line_no);
        if (!have_header) {
            if (fields.size() < 2) throw InputError("line " + std::to_string(line_no) + ": need at least 2 columns");
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    if (!have_header) throw InputError("empty CSV input");
    return t;
}

inline RawTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return parse_csv(in);
}

/// Result of equal-frequency binning: bin index per value and the upper
/// boundaries separating consecutive bins (value <= boundary[b] falls in bin <= b).
struct Binning {
    std::vector<std::size_t> bin;
    std::vector<double> boundaries;
    std::size_t bins() const { return boundaries.size() + 1; }
};

/// Equal-frequency binning. Boundaries are the empirical quantiles
/// x_(ceil(k n / bins)) for k = 1..bins-1; duplicate boundaries collapse and
/// a value equal to a boundary goes to the lower bin.
inline Binning bin_numeric(std::span<const double> values, std::size_t bins = 10) {
    if (bins < 2) throw DomainError("bin_numeric: need at least 2 bins");
    Binning out;
    out.bin.assign(values.size(), 0);
    if (values.empty()) return out;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    for (std::size_t k = 1; k < bins; ++k) {
        const std::size_t rank = (k * n + bins - 1) / bins;  // ceil(k n / bins), 1-based
        const double b = sorted[std::max<std::size_t>(rank, 1) - 1];
        if (b >= sorted.back()) break;
        if (out.boundaries.empty() || b > out.boundaries.back()) out.boundaries.push_back(b);
    }
    if (out.boundaries.empty()) warn("bin_numeric: column is constant; using a single bin");
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.bin[i] = static_cast<std::size_t>(
            std::lower_bound(out.boundaries.begin(), out.boundaries.end(), values[i]) - out.boundaries.begin());
    }
    return out;
}

/// Replaces every numeric column (other than `keep_column`) holding more than
/// `bins` distinct values with bin labels "b0", "b1", ... Missing tokens stay.
/// Returns the names of the columns that were binned.
inline std::vector<std::string> discretize_numeric_columns(RawTable& t, std::size_t bins, std::size_t keep_column,
                                                           std::string_view missing = "?") {
    std::vector<std::string> binned;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (c == keep_column) continue;
        std::vector<double> values;
        std::vector<std::size_t> where;
        bool numeric = true;
        for (std::size_t r = 0; r < t.rows.size() && numeric; ++r) {
            const auto& cell = t.rows[r][c];
            if (cell == missing) continue;
            auto v = detail::parse_number(cell);
            if (!v) numeric = false;
            else {
                values.push_back(*v);
                where.push_back(r);
            }
        }
        if (!numeric || values.empty()) continue;
        std::vector<double> distinct = values;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() <= bins) continue;
        const Binning b = bin_numeric(values, bins);
        for (std::size_t k = 0; k < where.size(); ++k) t.rows[where[k]][c] = "b" + std::to_string(b.bin[k]);
        binned.push_back(t.header[c]);
    }
    return binned;
}

/// Nominal dataset with dictionary-coded values. Feature cells may be
/// kMissing; labels are always present.
struct Dataset {
    std::string name;
    std::vector<std::string> feature_names;
    std::string class_name;
    std::vector<std::vector<std::string>> feature_values;  // code -> string, per feature
    std::vector<std::string> class_values;
    std::vector<std::vector<ValueCode>> instances;
    std::vector<std::size_t> labels;
    std::size_t dropped_missing_class = 0;

    std::size_t size() const noexcept { return instances.size(); }
    std::size_t num_features() const noexcept { return feature_names.size(); }
    std::size_t num_classes() const noexcept { return class_values.size(); }
    std::size_t cardinality(std::size_t k) const { return feature_values[k].size(); }
    std::vector<std::size_t> cardinalities() const {
        std::vector<std::size_t> c;
        for (const auto& v : feature_values) c.push_back(v.size());
        return c;
    }
};

/// Codes a raw table. Codes follow first appearance in file order; cardinalities
/// come from a scan of the full column. Rows whose class is missing are dropped
/// and counted.
inline Dataset to_dataset(const RawTable& raw, std::size_t class_column, std::string_view missing = "?",
                          std::string name = {}) {
    if (class_column >= raw.header.size()) throw InputError("class column index out of range");
    Dataset d;
    d.name = std::move(name);
    d.class_name = raw.header[class_column];
    std::vector<std::size_t> feature_columns;
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
        if (c == class_column) continue;
        feature_columns.push_back(c);
        d.feature_names.push_back(raw.header[c]);
    }
    d.feature_values.resize(feature_columns.size());
    std::vector<std::unordered_map<std::string, ValueCode>> dict(feature_columns.size());
    std::unordered_map<std::string, std::size_t> class_dict;
    for (const auto& row : raw.rows) {
        const auto& label = row[class_column];
        if (label == missing || label.empty()) {
            ++d.dropped_missing_class;
            continue;
        }
        auto [it, fresh] = class_dict.try_emplace(label, d.class_values.size());
        if (fresh) d.class_values.push_back(label);
        d.labels.push_back(it->second);
        std::vector<ValueCode> codes(feature_columns.size());
        for (std::size_t k = 0; k < feature_columns.size(); ++k) {
            const auto& cell = row[feature_columns[k]];
            if (cell == missing || cell.empty()) {
                codes[k] = kMissing;
                continue;
            }
            auto [vit, vfresh] = dict[k].try_emplace(cell, static_cast<ValueCode>(d.feature_values[k].size()));
            if (vfresh) d.feature_values[k].push_back(cell);
            codes[k] = vit->second;
        }
        d.instances.push_back(std::move(codes));
    }
    return d;
}

/// Reads `path` and codes it. An empty `class_column` selects the last column.
inline Dataset load_csv(const std::string& path, const std::string& class_column = {},
                        std::string_view missing = "?", std::size_t discretize_bins = 0) {
    RawTable raw = read_csv(path);
    const std::size_t cls = class_column.empty() ? raw.header.size() - 1 : raw.column_index(class_column);
    if (discretize_bins > 0) discretize_numeric_columns(raw, discretize_bins, cls, missing);
    auto slash = path.find_last_of('/');
    return to_dataset(raw, cls, missing, slash == std::string::npos ? path : path.substr(slash + 1));
}

/// Seeded Fisher-Yates shuffle of the instance order.
inline void shuffle_instances(Dataset& d, std::uint64_t seed) {
    Rng rng(seed, 0x5348554646ULL);
    for (std::size_t i = d.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(d.instances[i - 1], d.instances[j]);
        std::swap(d.labels[i - 1], d.labels[j]);
    }
}

}  // namespace mibayes
