#pragma once

#include "rmove/graph/common.hpp"
#include "rmove/graph/skipgram.hpp"
#include "rmove/graph/walk_embed.hpp"

namespace rmove::graph {

/// Directed edge sampler: edges uniformly (unit weights), negatives by degree^0.75.
class LineSampler {
public:
    explicit LineSampler(const Adjacency& g) {
        std::vector<double> degree(g.size(), 0.0);
        for (std::size_t u = 0; u < g.size(); ++u) {
            for (const std::size_t* v = g.begin(u); v != g.end(u); ++v) {
                edges_.emplace_back(u, *v);
                degree[u] += 1.0;
                degree[*v] += 1.0;
            }
        }
        negatives_ = NegativeSampler(degree);
    }

    bool empty() const noexcept { return edges_.empty(); }

    /// Exactly `ratio` negative draws per positive edge.
    void draw(Rng& rng, std::size_t ratio, SgnsSample& s) const {
        const auto& e = edges_[rng.below(edges_.size())];
        s.center = e.first;
        s.positive = e.second;
        s.negatives.resize(ratio);
        for (auto& n : s.negatives) n = negatives_.draw(rng);
    }

    std::size_t edge_count() const noexcept { return edges_.size(); }

private:
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    NegativeSampler negatives_;
};

/// One LINE order. First order shares one table for both endpoints; second
/// order scores vertex rows against a separate context table.
/// Loss on a fixed probe sample is recorded before training and at ten checkpoints.
inline Matrix line_order(const Adjacency& g, int order, std::size_t dim, const Config& cfg, const Rng& rng,
                         std::vector<double>* curve) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Rng init = rng.split("init");
    Matrix emb = init_vectors(g.size(), dim, init);
    Matrix ctx = Matrix::Zero(n, static_cast<Eigen::Index>(dim));
    const LineSampler sampler(g);
    if (sampler.empty()) return Matrix::Zero(n, static_cast<Eigen::Index>(dim));
    Matrix& out = order == 1 ? emb : ctx;

    std::vector<SgnsSample> probe(200);
    Rng pr = rng.split("probe");
    for (auto& s : probe) sampler.draw(pr, cfg.line_negative_ratio, s);
    auto probe_loss = [&] { return sgns_objective(emb, out, probe, nullptr, nullptr) / probe.size(); };
    if (curve) curve->push_back(probe_loss());

    const std::size_t total = cfg.line_samples_per_edge * sampler.edge_count();
    const std::size_t checkpoint = std::max<std::size_t>(1, total / 10);
    Rng tr = rng.split("train");
    SgnsSample s;
    std::vector<double> coef;
    Eigen::VectorXd scratch;
    for (std::size_t t = 0; t < total; ++t) {
        sampler.draw(tr, cfg.line_negative_ratio, s);
        sgns_step(emb, out, s, decayed_lr(cfg.line_lr, t, total), coef, scratch);
        if (curve && (t + 1) % checkpoint == 0) curve->push_back(probe_loss());
    }
    return emb;
}

/// Order 3 concatenates first-order (dim/2) and second-order (dim/2) vectors.
inline GraphResult line(const Adjacency& directed, const Config& cfg, const Rng& rng) {
    const int order = static_cast<int>(cfg.line_order);
    if (order < 1 || order > 3) fail(ErrorKind::InvalidConfig, "line_order must be 1, 2 or 3");
    GraphResult r;
    r.meta = {{"order", order}, {"negative_ratio", cfg.line_negative_ratio}, {"dim", cfg.graph_dim},
              {"samples_per_edge", cfg.line_samples_per_edge}};
    if (directed.edge_count() == 0) r.meta["warning"] = "empty edge set: zero vectors";
    if (order == 3) {
        check_divisible(cfg.graph_dim, 2, "line halves");
        const std::size_t half = cfg.graph_dim / 2;
        r.vectors.resize(static_cast<Eigen::Index>(directed.size()), static_cast<Eigen::Index>(cfg.graph_dim));
        r.vectors.leftCols(static_cast<Eigen::Index>(half)) =
            line_order(directed, 1, half, cfg, rng.split("first"), &r.loss_curve);
        r.vectors.rightCols(static_cast<Eigen::Index>(half)) =
            line_order(directed, 2, half, cfg, rng.split("second"), nullptr);
    } else {
        r.vectors = line_order(directed, order, cfg.graph_dim, cfg, rng.split(order == 1 ? "first" : "second"),
                               &r.loss_curve);
    }
    return r;
}

} // namespace rmove::graph
