#pragma once

#include <cmath>

#include "rmove/graph/common.hpp"
#include "rmove/graph/svd.hpp"
#include "rmove/graph/walk_embed.hpp"

namespace rmove::graph {

inline Matrix dense_adjacency(const Adjacency& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Matrix A = Matrix::Zero(n, n);
    for (std::size_t u = 0; u < g.size(); ++u)
        for (const std::size_t* v = g.begin(u); v != g.end(u); ++v)
            A(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(*v)) = 1.0;
    return A;
}

inline Matrix row_normalize_l1(Matrix m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double s = m.row(i).cwiseAbs().sum();
        if (s > 0) m.row(i) /= s;
    }
    return m;
}

/// Stage 1: log-ratio of transition probability to the column negative
/// distribution (column mass^0.75), defined on edges only, then randomized tSVD.
inline Matrix prone_initial(const Adjacency& g, std::size_t dim, Rng& rng) {
    const Matrix A = dense_adjacency(g);
    const auto n = A.rows();
    const Matrix C = row_normalize_l1(A);
    Eigen::RowVectorXd neg = C.colwise().sum().array().pow(0.75);
    if (neg.sum() > 0) neg /= neg.sum();
    Matrix F = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (A(i, j) != 0.0) F(i, j) = std::log(C(i, j)) - (neg(j) > 0 ? std::log(neg(j)) : 0.0);
    Matrix U = scaled_left(randomized_svd(F, static_cast<Eigen::Index>(dim), 5, 10, rng));
    l2_normalize_rows(U);
    return U;
}

/// Stage 2: Chebyshev expansion of a Gaussian band-pass filter on the
/// normalized Laplacian of (I + A), followed by a dense SVD. Steps <= 1 leave
/// the input untouched.
inline Matrix prone_propagate(const Adjacency& g, const Matrix& a, std::size_t step, double theta, double mu) {
    if (step <= 1) return a;
    const auto n = static_cast<Eigen::Index>(g.size());
    const Matrix A = Matrix::Identity(n, n) + dense_adjacency(g);
    const Matrix DA = row_normalize_l1(A);
    const Matrix L = Matrix::Identity(n, n) - DA;
    const Matrix M = L - mu * Matrix::Identity(n, n);
    Matrix Lx0 = a;
    Matrix Lx1 = M * a;
    Lx1 = 0.5 * (M * Lx1) - a;
    Matrix conv = std::cyl_bessel_i(0.0, theta) * Lx0;
    conv -= 2.0 * std::cyl_bessel_i(1.0, theta) * Lx1;
    for (std::size_t i = 2; i < step; ++i) {
        Matrix Lx2 = M * Lx1;
        Lx2 = (M * Lx2 - 2.0 * Lx1) - Lx0;
        const double c = 2.0 * std::cyl_bessel_i(static_cast<double>(i), theta);
        if (i % 2 == 0) conv += c * Lx2;
        else conv -= c * Lx2;
        Lx0 = Lx1;
        Lx1 = Lx2;
    }
    const Matrix mm = A * (a - conv);
    Matrix U = scaled_left(truncated_svd(mm, a.cols()));
    l2_normalize_rows(U);
    return U;
}

inline GraphResult prone(const Adjacency& g, const Config& cfg, const Rng& rng) {
    Rng r = rng.split("rsvd");
    GraphResult out;
    const Matrix init = prone_initial(g, cfg.graph_dim, r);
    out.vectors = prone_propagate(g, init, cfg.prone_step, cfg.prone_theta, cfg.prone_mu);
    out.meta = {{"step", cfg.prone_step}, {"theta", cfg.prone_theta}, {"mu", cfg.prone_mu}, {"dim", cfg.graph_dim}};
    return out;
}

} // namespace rmove::graph
