#pragma once

// Sequential (prequential) evaluation: each instance is classified by a
// naive Bayes trained on all earlier instances, using the feature subset each
// filter selects from the earlier instances; then the model is updated.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mibayes/dataset.hpp"
#include "mibayes/filters.hpp"
#include "mibayes/naive_bayes.hpp"
#include "mibayes/ttest.hpp"

namespace mibayes {

struct FilterTrace {
    FilterConfig config;
    std::vector<std::uint8_t> correct;        // per instance
    std::vector<std::uint32_t> selected;      // features used for that instance
    std::vector<double> cumulative_accuracy;  // correct in first k / k

    double final_accuracy() const { return cumulative_accuracy.empty() ? 0.0 : cumulative_accuracy.back(); }
    double average_selected() const {
        if (selected.empty()) return 0.0;
        double s = 0.0;
        for (auto v : selected) s += v;
        return s / static_cast<double>(selected.size());
    }
};

struct EvalTrace {
    std::string dataset;
    std::size_t instances = 0;
    std::size_t features = 0;
    std::optional<std::uint64_t> seed;
    std::vector<FilterTrace> filters;
};

/// Per-feature sufficient statistics for the filters: complete-case counts
/// over (value, class) and, per class, instances whose feature value is missing.
class FeatureClassCounts {
public:
    FeatureClassCounts(std::size_t cardinality, std::size_t num_classes)
        : card_(cardinality), classes_(num_classes), joint_(cardinality * num_classes, 0.0),
          value_totals_(cardinality, 0.0), missing_by_class_(num_classes, 0.0) {}

    void add(ValueCode v, std::size_t label) {
        if (v == kMissing) {
            missing_by_class_[label] += 1.0;
            return;
        }
        const auto vi = static_cast<std::size_t>(v);
        if (vi >= card_) grow(vi + 1);
        joint_[vi * classes_ + label] += 1.0;
        value_totals_[vi] += 1.0;
    }

    /// Table restricted to the feature values seen in complete cases and the
    /// classes seen so far (`class_seen`), plus the prior. Returns nullopt when
    /// either axis has fewer than two observed values (MI is identically zero).
    std::optional<FeatureTable> table(std::size_t feature, const std::vector<bool>& class_seen,
                                      const PriorSpec& prior) const {
        std::vector<std::size_t> rows, cols;
        for (std::size_t v = 0; v < card_; ++v)
            if (value_totals_[v] > 0.0) rows.push_back(v);
        const bool no_prior = prior.alpha(2, 2) == 0.0;
        for (std::size_t c = 0; c < classes_; ++c) {
            if (!class_seen[c]) continue;
            if (no_prior) {
                double joint = 0.0;
                for (auto v : rows) joint += joint_[v * classes_ + c];
                if (joint == 0.0) continue;
            }
            cols.push_back(c);
        }
        if (rows.size() < 2 || cols.size() < 2) return std::nullopt;
        const double alpha = prior.alpha(rows.size(), cols.size());
        std::vector<double> cells;
        cells.reserve(rows.size() * cols.size());
        for (auto v : rows)
            for (auto c : cols) cells.push_back(joint_[v * classes_ + c] + alpha);
        std::vector<double> margin;
        margin.reserve(cols.size());
        for (auto c : cols) margin.push_back(missing_by_class_[c]);
        return FeatureTable{feature, ContingencyTable(rows.size(), cols.size(), std::move(cells)), {},
                            std::move(margin)};
    }

private:
    void grow(std::size_t card) {
        joint_.resize(card * classes_, 0.0);
        value_totals_.resize(card, 0.0);
        card_ = card;
    }

    std::size_t card_;
    std::size_t classes_;
    std::vector<double> joint_;
    std::vector<double> value_totals_;
    std::vector<double> missing_by_class_;
};

inline EvalTrace run_incremental(const Dataset& d, const std::vector<FilterConfig>& filters) {
    if (d.size() == 0) throw InputError("run_incremental: dataset is empty");
    for (const auto& f : filters) f.validate();
    EvalTrace trace;
    trace.dataset = d.name;
    trace.instances = d.size();
    trace.features = d.num_features();
    for (const auto& f : filters) {
        FilterTrace ft;
        ft.config = f;
        ft.correct.reserve(d.size());
        ft.selected.reserve(d.size());
        ft.cumulative_accuracy.reserve(d.size());
        trace.filters.push_back(std::move(ft));
    }

    CountsModel model(d.num_classes(), d.cardinalities());
    std::vector<FeatureClassCounts> stats;
    for (std::size_t k = 0; k < d.num_features(); ++k) stats.emplace_back(d.cardinality(k), d.num_classes());
    std::vector<bool> class_seen(d.num_classes(), false);
    std::vector<std::size_t> correct_so_far(filters.size(), 0);
    std::vector<std::size_t> chosen;

    for (std::size_t n = 0; n < d.size(); ++n) {
        const auto& x = d.instances[n];
        const std::size_t y = d.labels[n];
        for (std::size_t f = 0; f < filters.size(); ++f) {
            chosen.clear();
            for (std::size_t k = 0; k < d.num_features(); ++k) {
                auto table = stats[k].table(k, class_seen, filters[f].prior);
                if (table && decide(*table, filters[f]).included) chosen.push_back(k);
            }
            const bool ok = model.predict(x, chosen).label == y;
            auto& ft = trace.filters[f];
            correct_so_far[f] += ok;
            ft.correct.push_back(ok ? 1 : 0);
            ft.selected.push_back(static_cast<std::uint32_t>(chosen.size()));
            ft.cumulative_accuracy.push_back(static_cast<double>(correct_so_far[f]) / static_cast<double>(n + 1));
        }
        model.update(x, y);
        class_seen[y] = true;
        for (std::size_t k = 0; k < d.num_features(); ++k) stats[k].add(x[k], y);
    }
    return trace;
}

/// Maximal runs [first, last] of 1-based prefix lengths k at which the paired
/// t test on the first k correctness values of `a` and `b` is significant.
inline std::vector<std::pair<std::size_t, std::size_t>> significance_ranges(const FilterTrace& a,
                                                                            const FilterTrace& b,
                                                                            double alpha = kSignificanceLevel) {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    double sum = 0.0, sum_sq = 0.0;
    bool open = false;
    const std::size_t n = std::min(a.correct.size(), b.correct.size());
    for (std::size_t k = 1; k <= n; ++k) {
        const double diff = static_cast<double>(a.correct[k - 1]) - static_cast<double>(b.correct[k - 1]);
        sum += diff;
        sum_sq += diff * diff;
        const bool sig = paired_ttest_from_sums(k, sum, sum_sq, alpha).significant;
        if (sig && !open) {
            ranges.emplace_back(k, k);
            open = true;
        } else if (sig) {
            ranges.back().second = k;
        } else {
            open = false;
        }
    }
    return ranges;
}

}  // namespace mibayes
