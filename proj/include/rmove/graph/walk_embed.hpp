#pragma once

#include "rmove/graph/common.hpp"
#include "rmove/graph/skipgram.hpp"
#include "rmove/graph/walks.hpp"
#include "rmove/parallel.hpp"

namespace rmove::graph {

struct GraphResult {
    Matrix vectors;
    nlohmann::json meta = nlohmann::json::object();
    std::vector<double> loss_curve;
};

inline SkipGramParams skipgram_params(const Config& cfg, std::size_t dim, std::size_t window) {
    return {dim, window, as_size(cfg.negatives), as_size(cfg.sg_epochs), cfg.sg_lr};
}

inline GraphResult walk_embedding(const Adjacency& g, const Config& cfg, double p, double q, const Rng& rng) {
    const auto corpus = sample_walks(g, cfg.walk_length, cfg.walks_per_node, p, q, rng.split("walks"),
                                     worker_count(cfg.threads));
    auto sg = skipgram_train(corpus.walks, g.size(), skipgram_params(cfg, cfg.graph_dim, cfg.window),
                             rng.split("skipgram"));
    GraphResult r;
    r.vectors = std::move(sg.vectors);
    r.loss_curve = std::move(sg.heldout_loss);
    r.meta = {{"number_walks", cfg.walks_per_node}, {"walk_length", cfg.walk_length}, {"window_size", cfg.window},
              {"dim", cfg.graph_dim}, {"negatives", cfg.negatives}, {"epochs", cfg.sg_epochs}};
    return r;
}

inline GraphResult deepwalk(const Adjacency& g, const Config& cfg, const Rng& rng) {
    return walk_embedding(g, cfg, 1.0, 1.0, rng);
}

inline GraphResult node2vec(const Adjacency& g, const Config& cfg, const Rng& rng) {
    auto r = walk_embedding(g, cfg, cfg.node2vec_p, cfg.node2vec_q, rng);
    r.meta["p"] = cfg.node2vec_p;
    r.meta["q"] = cfg.node2vec_q;
    return r;
}

/// Scale k trains on every k-th node of each walk with dim/K dimensions; scale
/// vectors are concatenated in scale order. Scale 1 shares DeepWalk's streams.
inline GraphResult walklets(const Adjacency& g, const Config& cfg, const Rng& rng) {
    const std::size_t K = cfg.walklets_scales;
    check_divisible(cfg.graph_dim, K, "walklets scales");
    const std::size_t sub = cfg.graph_dim / K;
    const auto corpus = sample_walks(g, cfg.walklets_length, cfg.walklets_walks, 1.0, 1.0, rng.split("walks"),
                                     worker_count(cfg.threads));
    GraphResult r;
    r.vectors.resize(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(cfg.graph_dim));
    const Rng base = rng.split("skipgram");
    for (std::size_t k = 1; k <= K; ++k) {
        const auto skipped = k == 1 ? corpus.walks : skip_walks(corpus.walks, k);
        auto sg = skipgram_train(skipped, g.size(), skipgram_params(cfg, sub, cfg.walklets_window),
                                 k == 1 ? base : base.split(static_cast<std::uint64_t>(k)));
        r.vectors.middleCols(static_cast<Eigen::Index>((k - 1) * sub), static_cast<Eigen::Index>(sub)) = sg.vectors;
        if (k == 1) r.loss_curve = sg.heldout_loss;
    }
    r.meta = {{"walk_number", cfg.walklets_walks}, {"walk_length", cfg.walklets_length}, {"window_size", K},
              {"dim", cfg.graph_dim}, {"skipgram_window", cfg.walklets_window}};
    return r;
}

} // namespace rmove::graph
