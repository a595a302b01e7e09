#include "hybridcast/learners/gbt.hpp"

#include "hybridcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hybridcast {

namespace {

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

struct NodeStats {
    double g = 0.0;
    double h = 0.0;
};

double leaf_score(double g, double h, double lambda) { return g * g / (h + lambda); }

// Exact greedy growth, level by level: one pass over each presorted feature
// column per level evaluates every split of every open node.
RegressionTree grow_tree(const std::vector<std::vector<double>>& columns,
                         const std::vector<std::vector<std::size_t>>& sorted, std::span<const double> grad,
                         std::span<const double> hess, const GbtParams& params) {
    const std::size_t n = grad.size();
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of(n, 0);

    NodeStats root;
    for (std::size_t i = 0; i < n; ++i) {
        root.g += grad[i];
        root.h += hess[i];
    }
    std::vector<NodeStats> stats{root};
    std::vector<int> open{0};

    for (int level = 0; level < params.max_depth && !open.empty(); ++level) {
        std::vector<SplitCandidate> best(tree.nodes.size());
        std::vector<NodeStats> left(tree.nodes.size());
        std::vector<double> last_value(tree.nodes.size());
        std::vector<bool> seen(tree.nodes.size());
        std::vector<bool> is_open(tree.nodes.size(), false);
        for (int id : open) {
            is_open[static_cast<std::size_t>(id)] = true;
        }

        for (std::size_t f = 0; f < columns.size(); ++f) {
            std::fill(left.begin(), left.end(), NodeStats{});
            std::fill(seen.begin(), seen.end(), false);
            for (std::size_t idx : sorted[f]) {
                const auto node = static_cast<std::size_t>(node_of[idx]);
                if (!is_open[node]) {
                    continue;
                }
                const double v = columns[f][idx];
                if (seen[node] && v > last_value[node]) {
                    const NodeStats& total = stats[node];
                    const double gl = left[node].g;
                    const double hl = left[node].h;
                    const double gr = total.g - gl;
                    const double hr = total.h - hl;
                    if (hl >= params.min_child_weight && hr >= params.min_child_weight) {
                        const double gain = 0.5 * (leaf_score(gl, hl, params.lambda) + leaf_score(gr, hr, params.lambda) -
                                                   leaf_score(total.g, total.h, params.lambda)) -
                                            params.gamma_split;
                        if (gain > best[node].gain) {
                            double thr = last_value[node] + 0.5 * (v - last_value[node]);
                            if (!(thr < v)) {
                                thr = last_value[node];
                            }
                            best[node] = {gain, static_cast<int>(f), thr};
                        }
                    }
                }
                left[node].g += grad[idx];
                left[node].h += hess[idx];
                last_value[node] = v;
                seen[node] = true;
            }
        }

        std::vector<int> next_open;
        for (int id : open) {
            const auto node = static_cast<std::size_t>(id);
            if (best[node].feature < 0) {
                continue;
            }
            const int l = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            stats.emplace_back();
            stats.emplace_back();
            tree.nodes[node].feature = best[node].feature;
            tree.nodes[node].threshold = best[node].threshold;
            tree.nodes[node].left = l;
            tree.nodes[node].right = l + 1;
            next_open.push_back(l);
            next_open.push_back(l + 1);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto& parent = tree.nodes[static_cast<std::size_t>(node_of[i])];
            if (parent.feature < 0) {
                continue;
            }
            const bool go_left = columns[static_cast<std::size_t>(parent.feature)][i] <= parent.threshold;
            node_of[i] = go_left ? parent.left : parent.right;
            auto& s = stats[static_cast<std::size_t>(node_of[i])];
            s.g += grad[i];
            s.h += hess[i];
        }
        open = std::move(next_open);
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        if (tree.nodes[id].feature < 0) {
            tree.nodes[id].value = -stats[id].g / (stats[id].h + params.lambda);
        }
    }
    return tree;
}

}  // namespace

double RegressionTree::evaluate(std::span<const double> z) const {
    std::size_t id = 0;
    while (nodes[id].feature >= 0) {
        const auto& node = nodes[id];
        id = static_cast<std::size_t>(z[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
    }
    return nodes[id].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t id = 0; id < nodes.size(); ++id) {
        if (nodes[id].feature >= 0) {
            d[static_cast<std::size_t>(nodes[id].left)] = d[id] + 1;
            d[static_cast<std::size_t>(nodes[id].right)] = d[id] + 1;
        }
        deepest = std::max(deepest, d[id]);
    }
    return deepest;
}

double GbtEnsemble::predict(std::span<const double> x) const { return predict_staged(x, trees.size()); }

double GbtEnsemble::predict_staged(std::span<const double> x, std::size_t k) const {
    if (x.size() != scaler.dims()) {
        throw Error(ErrorCode::DimensionMismatch, "GBT expects " + std::to_string(scaler.dims()) + " features, got " +
                                                      std::to_string(x.size()));
    }
    const auto z = scaler.apply(x);
    double pred = base_score;
    const std::size_t upto = std::min(k, trees.size());
    for (std::size_t t = 0; t < upto; ++t) {
        pred += learning_rate * trees[t].evaluate(z);
    }
    return pred;
}

GbtEnsemble gbt_fit(const FeatureMatrix& x, const GbtParams& params) {
    if (x.rows < 2) {
        throw Error(ErrorCode::TooShort, "GBT needs at least two rows");
    }
    if (params.max_depth < 0 || !(params.learning_rate > 0.0) || params.lambda < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "invalid GBT parameters");
    }
    GbtEnsemble model;
    model.learning_rate = params.learning_rate;
    model.lambda = params.lambda;
    model.gamma_split = params.gamma_split;
    model.max_depth = params.max_depth;
    model.scaler = Standardizer::fit(x);
    model.base_score = std::accumulate(x.target.begin(), x.target.end(), 0.0) / static_cast<double>(x.rows);

    const std::size_t n = x.rows;
    std::vector<std::vector<double>> columns(x.cols, std::vector<double>(n));
    std::vector<double> buf(x.cols);
    for (std::size_t r = 0; r < n; ++r) {
        model.scaler.apply(x.row(r), buf);
        for (std::size_t c = 0; c < x.cols; ++c) {
            columns[c][r] = buf[c];
        }
    }
    std::vector<std::vector<std::size_t>> sorted(x.cols, std::vector<std::size_t>(n));
    for (std::size_t c = 0; c < x.cols; ++c) {
        std::iota(sorted[c].begin(), sorted[c].end(), 0);
        std::stable_sort(sorted[c].begin(), sorted[c].end(),
                         [&](std::size_t a, std::size_t b) { return columns[c][a] < columns[c][b]; });
    }

    std::vector<double> pred(n, model.base_score);
    std::vector<double> grad(n);
    const std::vector<double> hess(n, 1.0);
    std::vector<double> z(x.cols);
    for (std::size_t t = 0; t < params.trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = pred[i] - x.target[i];
        }
        model.trees.push_back(grow_tree(columns, sorted, grad, hess, params));
        const auto& tree = model.trees.back();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < x.cols; ++c) {
                z[c] = columns[c][i];
            }
            pred[i] += model.learning_rate * tree.evaluate(z);
        }
    }
    return model;
}

}  // namespace hybridcast
