#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mibayes/errors.hpp"

namespace mibayes {

/// Posterior count matrix n_ij (data counts plus prior counts) of two
/// discrete variables, stored row-major. Immutable after construction;
/// marginals are computed once from the cells.
class ContingencyTable {
public:
    ContingencyTable(std::size_t rows, std::size_t cols, std::vector<double> counts)
        : rows_(rows), cols_(cols), counts_(std::move(counts)), row_totals_(rows, 0.0), col_totals_(cols, 0.0) {
        if (rows < 1 || cols < 1) throw DomainError("ContingencyTable: dimensions must be positive");
        if (counts_.size() != rows * cols) {
            throw DomainError("ContingencyTable: expected " + std::to_string(rows * cols) + " cells, got " +
                              std::to_string(counts_.size()));
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                const double v = counts_[i * cols_ + j];
                if (!(v >= 0.0) || !std::isfinite(v)) {
                    throw DomainError("ContingencyTable: counts must be finite and non-negative");
                }
                row_totals_[i] += v;
                col_totals_[j] += v;
            }
        }
        total_ = std::accumulate(row_totals_.begin(), row_totals_.end(), 0.0);
        if (!(total_ > 0.0)) throw DomainError("ContingencyTable: total count must be positive");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
    double row_total(std::size_t i) const { return row_totals_[i]; }
    double col_total(std::size_t j) const { return col_totals_[j]; }
    double total() const noexcept { return total_; }
    std::span<const double> cells() const noexcept { return counts_; }

    /// min(log r, log s) over the declared dimensions.
    double i_max() const { return std::log(static_cast<double>(std::min(rows_, cols_))); }

    ContingencyTable transposed() const {
        std::vector<double> t(counts_.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = counts_[i * cols_ + j];
        return {cols_, rows_, std::move(t)};
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> counts_;
    std::vector<double> row_totals_;
    std::vector<double> col_totals_;
    double total_ = 0.0;
};

/// Non-informative Dirichlet prior, expressed as a per-cell prior count.
struct PriorSpec {
    enum class Kind { uniform, jeffreys, haldane, perks, custom };

    Kind kind = Kind::uniform;
    double custom_alpha = 0.0;

    static PriorSpec uniform() { return {Kind::uniform, 0.0}; }
    static PriorSpec jeffreys() { return {Kind::jeffreys, 0.0}; }
    static PriorSpec haldane() { return {Kind::haldane, 0.0}; }
    static PriorSpec perks() { return {Kind::perks, 0.0}; }
    static PriorSpec custom(double alpha) {
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
            throw DomainError("PriorSpec: custom prior count must be finite and non-negative");
        }
        return {Kind::custom, alpha};
    }

    /// Prior count added to each cell of an r x s table.
    double alpha(std::size_t rows, std::size_t cols) const {
        switch (kind) {
            case Kind::uniform: return 1.0;
            case Kind::jeffreys: return 0.5;
            case Kind::haldane: return 0.0;
            case Kind::perks: return 1.0 / static_cast<double>(rows * cols);
            case Kind::custom: return custom_alpha;
        }
        return 1.0;
    }

    std::string name() const {
        switch (kind) {
            case Kind::uniform: return "uniform";
            case Kind::jeffreys: return "jeffreys";
            case Kind::haldane: return "haldane";
            case Kind::perks: return "perks";
            case Kind::custom: return "custom";
        }
        return "uniform";
    }
};

inline PriorSpec parse_prior(std::string_view name) {
    if (name == "uniform") return PriorSpec::uniform();
    if (name == "jeffreys") return PriorSpec::jeffreys();
    if (name == "haldane") return PriorSpec::haldane();
    if (name == "perks") return PriorSpec::perks();
    throw InputError("unknown prior '" + std::string(name) + "' (expected uniform, jeffreys, haldane or perks)");
}

/// Posterior table from raw data counts: n_ij = data_ij + alpha.
inline ContingencyTable build_table(std::size_t rows, std::size_t cols, std::span<const double> data_counts,
                                    const PriorSpec& prior) {
    if (rows < 2 || cols < 2) throw DomainError("build_table: both variables need at least two values");
    if (data_counts.size() != rows * cols) throw DomainError("build_table: count vector does not match r x s");
    const double alpha = prior.alpha(rows, cols);
    std::vector<double> counts(data_counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (!(data_counts[k] >= 0.0)) throw DomainError("build_table: negative data count");
        counts[k] = data_counts[k] + alpha;
    }
    return {rows, cols, std::move(counts)};
}

}  // namespace mibayes
