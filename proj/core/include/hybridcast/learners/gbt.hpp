#pragma once

#include "hybridcast/learners/features.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hybridcast {

struct GbtParams {
    std::size_t trees = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
    double lambda = 1.0;       // L2 penalty on leaf values
    double gamma_split = 0.0;  // minimum loss reduction to split
    double min_child_weight = 1.0;
};

struct RegressionTree {
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes;

    /// Leaf value for an already standardised row (x <= threshold goes left).
    double evaluate(std::span<const double> z) const;
    int depth() const;
};

/// Second-order boosted regression trees under squared loss.
struct GbtEnsemble {
    std::vector<RegressionTree> trees;
    double learning_rate = 0.1;
    double base_score = 0.0;
    double lambda = 1.0;
    double gamma_split = 0.0;
    int max_depth = 0;
    Standardizer scaler;

    double predict(std::span<const double> x) const;
    /// Prediction using only the first k trees.
    double predict_staged(std::span<const double> x, std::size_t k) const;
    std::size_t input_dim() const noexcept { return scaler.dims(); }
};

GbtEnsemble gbt_fit(const FeatureMatrix& x, const GbtParams& params);

}  // namespace hybridcast
