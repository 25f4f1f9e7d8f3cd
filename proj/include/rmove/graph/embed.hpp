#pragma once

#include "rmove/graph/grarep.hpp"
#include "rmove/graph/line.hpp"
#include "rmove/graph/prone.hpp"
#include "rmove/graph/sdne.hpp"
#include "rmove/graph/walk_embed.hpp"

namespace rmove::graph {

/// LINE reads the directed call graph; every other technique the undirected view.
inline GraphResult run_technique(Technique t, const MethodDependencyGraph& g, const Config& cfg, const Rng& rng) {
    check_graph_dim(cfg.graph_dim, g.size(), cfg.strict_dims);
    switch (t) {
    case Technique::DeepWalk: return deepwalk(undirected_view(g), cfg, rng);
    case Technique::Node2Vec: return node2vec(undirected_view(g), cfg, rng);
    case Technique::Walklets: return walklets(undirected_view(g), cfg, rng);
    case Technique::GraRep: return grarep(undirected_view(g), cfg, rng);
    case Technique::Line: return line(directed_adjacency(g), cfg, rng);
    case Technique::ProNE: return prone(undirected_view(g), cfg, rng);
    case Technique::SDNE: return sdne(undirected_view(g), cfg, rng);
    }
    fail(ErrorKind::InvalidConfig, "unknown technique");
}

inline EmbeddingTable embed_graph(Technique t, const MethodDependencyGraph& g, const Config& cfg, const Rng& rng) {
    auto r = run_technique(t, g, cfg, rng);
    for (Eigen::Index i = 0; i < r.vectors.size(); ++i)
        if (!std::isfinite(r.vectors.data()[i])) fail(ErrorKind::InvalidConfig, std::string(to_string(t)) + " diverged");
    r.meta["seed"] = rng.seed();
    r.meta["loss_curve"] = r.loss_curve;
    return to_table(t, g, std::move(r.vectors), std::move(r.meta));
}

} // namespace rmove::graph
