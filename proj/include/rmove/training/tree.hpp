#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "json.hpp"

#include "rmove/embedding.hpp"
#include "rmove/rng.hpp"

namespace rmove::training {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;
    std::size_t samples = 0;

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeParams {
    std::size_t max_depth = 0; // 0 = unlimited
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    std::size_t max_features = 0; // 0 = all features at every node
};

/// Binary regression tree split by squared error. On 0/1 targets the squared
/// error of a node is half its Gini impurity times its size, so the same
/// builder grows CART classification trees.
class Tree {
public:
    std::vector<TreeNode> nodes;

    using LeafFn = std::function<double(const std::vector<std::size_t>&)>;

    /// `rows` may repeat a sample (bootstrap). `leaf` overrides the mean target.
    static Tree fit(const Matrix& X, const std::vector<double>& target, std::vector<std::size_t> rows,
                    const TreeParams& p, Rng& rng, const LeafFn& leaf = {}) {
        Tree t;
        t.grow(X, target, std::move(rows), p, rng, leaf, 0);
        return t;
    }

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        int k = 0;
        while (nodes[static_cast<std::size_t>(k)].feature >= 0) {
            const auto& n = nodes[static_cast<std::size_t>(k)];
            k = x(n.feature) <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(k)].value;
    }

    std::size_t depth() const { return nodes.empty() ? 0 : depth_of(0); }

    /// Preorder (feature, threshold) of internal nodes.
    std::vector<std::pair<int, double>> splits() const {
        std::vector<std::pair<int, double>> out;
        collect(0, out);
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& n : nodes) a.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.samples});
        return a;
    }

    static Tree from_json(const nlohmann::json& j) {
        Tree t;
        for (const auto& e : j)
            t.nodes.push_back({e.at(0).get<int>(), e.at(1).get<double>(), e.at(2).get<int>(), e.at(3).get<int>(),
                               e.at(4).get<double>(), e.at(5).get<std::size_t>()});
        return t;
    }

    friend bool operator==(const Tree&, const Tree&) = default;

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    std::size_t depth_of(std::size_t k) const {
        const auto& n = nodes[k];
        if (n.feature < 0) return 0;
        return 1 + std::max(depth_of(static_cast<std::size_t>(n.left)), depth_of(static_cast<std::size_t>(n.right)));
    }

    void collect(std::size_t k, std::vector<std::pair<int, double>>& out) const {
        const auto& n = nodes[k];
        if (n.feature < 0) return;
        out.emplace_back(n.feature, n.threshold);
        collect(static_cast<std::size_t>(n.left), out);
        collect(static_cast<std::size_t>(n.right), out);
    }

    static Split best_split(const Matrix& X, const std::vector<double>& t, const std::vector<std::size_t>& rows,
                            const std::vector<int>& features, std::size_t min_leaf) {
        const std::size_t n = rows.size();
        double sum = 0, sq = 0;
        for (auto r : rows) {
            sum += t[r];
            sq += t[r] * t[r];
        }
        const double parent = sq - sum * sum / static_cast<double>(n);
        Split best;
        std::vector<std::size_t> order(rows);
        for (int f : features) {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return X(static_cast<Eigen::Index>(a), f) < X(static_cast<Eigen::Index>(b), f); });
            double ls = 0, lq = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double v = t[order[i]];
                ls += v;
                lq += v * v;
                const double xi = X(static_cast<Eigen::Index>(order[i]), f);
                const double xn = X(static_cast<Eigen::Index>(order[i + 1]), f);
                const std::size_t nl = i + 1, nr = n - nl;
                if (xi == xn || nl < min_leaf || nr < min_leaf) continue;
                const double rs = sum - ls, rq = sq - lq;
                const double sse = (lq - ls * ls / static_cast<double>(nl)) + (rq - rs * rs / static_cast<double>(nr));
                const double gain = parent - sse;
                if (gain > best.gain + 1e-12) best = {f, xi + (xn - xi) / 2, gain};
            }
        }
        return best;
    }

    int grow(const Matrix& X, const std::vector<double>& t, std::vector<std::size_t> rows, const TreeParams& p,
             Rng& rng, const LeafFn& leaf, std::size_t depth) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({});
        double mean = 0;
        for (auto r : rows) mean += t[r];
        mean /= static_cast<double>(std::max<std::size_t>(1, rows.size()));
        nodes.back().samples = rows.size();
        nodes.back().value = leaf ? leaf(rows) : mean;

        const bool depth_ok = p.max_depth == 0 || depth < p.max_depth;
        if (!depth_ok || rows.size() < std::max<std::size_t>(2, p.min_samples_split)) return id;
        const auto F = static_cast<int>(X.cols());
        std::vector<int> features(static_cast<std::size_t>(F));
        std::iota(features.begin(), features.end(), 0);
        if (p.max_features > 0 && p.max_features < features.size()) {
            for (std::size_t i = 0; i < p.max_features; ++i)
                std::swap(features[i], features[i + rng.below(features.size() - i)]);
            features.resize(p.max_features);
            std::sort(features.begin(), features.end());
        }
        const Split s = best_split(X, t, rows, features, std::max<std::size_t>(1, p.min_samples_leaf));
        if (s.feature < 0) return id;

        std::vector<std::size_t> lrows, rrows;
        for (auto r : rows) (X(static_cast<Eigen::Index>(r), s.feature) <= s.threshold ? lrows : rrows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(X, t, std::move(lrows), p, rng, leaf, depth + 1);
        const int r = grow(X, t, std::move(rrows), p, rng, leaf, depth + 1);
        auto& n = nodes[static_cast<std::size_t>(id)];
        n.feature = s.feature;
        n.threshold = s.threshold;
        n.left = l;
        n.right = r;
        return id;
    }
};

} // namespace rmove::training
