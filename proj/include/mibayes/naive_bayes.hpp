#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mibayes/errors.hpp"

namespace mibayes {

/// Feature values are small non-negative codes; kMissing marks an unobserved cell.
using ValueCode = std::int32_t;
inline constexpr ValueCode kMissing = -1;

struct Prediction {
    std::size_t label = 0;
    std::vector<double> scores;  // normalized posterior class probabilities
};

/// Count-based naive Bayes with a uniform (add-one) prior on every
/// conditional and on the class distribution. Updated one instance at a time.
class CountsModel {
public:
    /// `cardinalities[k]` is the declared number of values of feature k;
    /// it grows when a larger code is seen by update().
    CountsModel(std::size_t num_classes, std::vector<std::size_t> cardinalities)
        : num_classes_(num_classes),
          cardinalities_(std::move(cardinalities)),
          class_counts_(num_classes, 0),
          observed_(cardinalities_.size(), std::vector<std::uint64_t>(num_classes, 0)),
          value_counts_(cardinalities_.size()) {
        if (num_classes < 1) throw DomainError("CountsModel: need at least one class");
        for (std::size_t k = 0; k < cardinalities_.size(); ++k)
            value_counts_[k].assign(cardinalities_[k] * num_classes_, 0);
    }

    std::size_t num_classes() const noexcept { return num_classes_; }
    std::size_t num_features() const noexcept { return cardinalities_.size(); }
    std::size_t cardinality(std::size_t k) const { return cardinalities_[k]; }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t class_count(std::size_t c) const { return class_counts_[c]; }
    /// Instances of class c whose feature k was observed.
    std::uint64_t observed_count(std::size_t k, std::size_t c) const { return observed_[k][c]; }
    std::uint64_t count(std::size_t k, std::size_t c, ValueCode v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= cardinalities_[k]) return 0;
        return value_counts_[k][static_cast<std::size_t>(v) * num_classes_ + c];
    }

    void update(std::span<const ValueCode> instance, std::size_t label) {
        if (label >= num_classes_) throw DomainError("CountsModel::update: class index out of range");
        if (instance.size() != cardinalities_.size()) throw DomainError("CountsModel::update: wrong feature count");
        ++total_;
        ++class_counts_[label];
        for (std::size_t k = 0; k < instance.size(); ++k) {
            const ValueCode v = instance[k];
            if (v == kMissing) continue;
            if (v < 0) throw DomainError("CountsModel::update: negative value code");
            grow(k, static_cast<std::size_t>(v) + 1);
            ++value_counts_[k][static_cast<std::size_t>(v) * num_classes_ + label];
            ++observed_[k][label];
        }
    }

    /// argmax_c log((N_c+1)/(N+|C|)) + sum_{k in selected, observed}
    ///          log((N_ckv+1)/(N_ck+|V_k|)); ties go to the lowest class index.
    /// A value code beyond the known domain counts as one extra value.
    Prediction predict(std::span<const ValueCode> instance, std::span<const std::size_t> selected) const {
        std::vector<double> log_score(num_classes_);
        const double denom = static_cast<double>(total_ + num_classes_);
        for (std::size_t c = 0; c < num_classes_; ++c)
            log_score[c] = std::log((static_cast<double>(class_counts_[c]) + 1.0) / denom);
        for (std::size_t k : selected) {
            if (k >= cardinalities_.size()) throw DomainError("CountsModel::predict: unknown feature index");
            const ValueCode v = instance[k];
            if (v == kMissing) continue;
            std::size_t card = cardinalities_[k];
            if (static_cast<std::size_t>(v) >= card) card = static_cast<std::size_t>(v) + 1;
            for (std::size_t c = 0; c < num_classes_; ++c) {
                const double n_v = static_cast<double>(count(k, c, v));
                const double n_c = static_cast<double>(observed_[k][c]);
                log_score[c] += std::log((n_v + 1.0) / (n_c + static_cast<double>(card)));
            }
        }
        Prediction p;
        p.label = static_cast<std::size_t>(std::max_element(log_score.begin(), log_score.end()) - log_score.begin());
        const double top = log_score[p.label];
        p.scores.resize(num_classes_);
        double z = 0.0;
        for (std::size_t c = 0; c < num_classes_; ++c) z += p.scores[c] = std::exp(log_score[c] - top);
        for (auto& s : p.scores) s /= z;
        return p;
    }

private:
    void grow(std::size_t k, std::size_t needed) {
        if (needed <= cardinalities_[k]) return;
        cardinalities_[k] = needed;
        value_counts_[k].resize(needed * num_classes_, 0);
    }

    std::size_t num_classes_;
    std::vector<std::size_t> cardinalities_;
    std::vector<std::uint64_t> class_counts_;
    std::vector<std::vector<std::uint64_t>> observed_;
    std::vector<std::vector<std::uint64_t>> value_counts_;
    std::uint64_t total_ = 0;
};

}  // namespace mibayes
