#pragma once

#include <cmath>

#include "rmove/graph/common.hpp"
#include "rmove/graph/svd.hpp"
#include "rmove/graph/walk_embed.hpp"

namespace rmove::graph {

/// Row-normalized adjacency. A zero-degree row becomes uniform over all nodes.
inline Matrix transition_matrix(const Adjacency& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Matrix A = Matrix::Zero(n, n);
    for (std::size_t u = 0; u < g.size(); ++u) {
        const auto row = static_cast<Eigen::Index>(u);
        if (g.degree(u) == 0) {
            A.row(row).setConstant(1.0 / static_cast<double>(n));
            continue;
        }
        for (const std::size_t* v = g.begin(u); v != g.end(u); ++v)
            A(row, static_cast<Eigen::Index>(*v)) = 1.0 / static_cast<double>(g.degree(u));
    }
    return A;
}

/// log(x / beta) with beta = 1/|V|; zero and negative results clamp to 0.
inline Matrix log_shifted(const Matrix& Ak) {
    const double n = static_cast<double>(Ak.rows());
    Matrix M = Ak;
    for (Eigen::Index i = 0; i < M.size(); ++i) {
        const double x = M.data()[i];
        M.data()[i] = x > 0 ? std::max(0.0, std::log(x * n)) : 0.0;
    }
    return M;
}

inline GraphResult grarep(const Adjacency& g, const Config& cfg, const Rng&) {
    const std::size_t K = cfg.grarep_kstep;
    if (K < 1) fail(ErrorKind::InvalidConfig, "grarep_kstep must be >= 1");
    check_divisible(cfg.graph_dim, K, "kstep");
    const auto r = static_cast<Eigen::Index>(cfg.graph_dim / K);
    const auto n = static_cast<Eigen::Index>(g.size());
    GraphResult out;
    out.vectors = Matrix::Zero(n, static_cast<Eigen::Index>(cfg.graph_dim));
    if (n == 0) return out;
    const Matrix A = transition_matrix(g);
    Matrix Ak = Matrix::Identity(n, n);
    for (std::size_t s = 1; s <= K; ++s) {
        Ak = Ak * A;
        out.vectors.middleCols(static_cast<Eigen::Index>(s - 1) * r, r) = scaled_left(truncated_svd(log_shifted(Ak), r));
    }
    out.meta = {{"kstep", K}, {"dim", cfg.graph_dim}};
    return out;
}

} // namespace rmove::graph
