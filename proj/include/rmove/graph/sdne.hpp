#pragma once

#include <array>
#include <cmath>

#include "rmove/graph/common.hpp"
#include "rmove/graph/prone.hpp"
#include "rmove/graph/skipgram.hpp"
#include "rmove/graph/walk_embed.hpp"

namespace rmove::graph {

struct SdneHyper {
    double alpha = 1e-6; // first-order (Laplacian) weight
    double beta = 5.0;   // reconstruction weight on nonzero entries
    double nu1 = 1e-5;   // L1 on weights
    double nu2 = 1e-4;   // L2 on weights
};

/// Autoencoder [N -> H -> d -> H -> N], sigmoid on every layer.
struct SdneNet {
    std::array<Matrix, 4> W;
    std::array<Eigen::RowVectorXd, 4> b;

    static SdneNet zeros_like(const SdneNet& o) {
        SdneNet z;
        for (int l = 0; l < 4; ++l) {
            z.W[l] = Matrix::Zero(o.W[l].rows(), o.W[l].cols());
            z.b[l] = Eigen::RowVectorXd::Zero(o.b[l].size());
        }
        return z;
    }
};

inline SdneNet sdne_init(std::size_t n, std::size_t hidden, std::size_t dim, Rng& rng) {
    const std::array<Eigen::Index, 5> sizes = {static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(hidden),
                                               static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(hidden),
                                               static_cast<Eigen::Index>(n)};
    SdneNet net;
    for (int l = 0; l < 4; ++l) {
        const double bound = std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l + 1]));
        net.W[l].resize(sizes[l], sizes[l + 1]);
        for (Eigen::Index i = 0; i < net.W[l].size(); ++i) net.W[l].data()[i] = rng.uniform(-bound, bound);
        net.b[l] = Eigen::RowVectorXd::Zero(sizes[l + 1]);
    }
    return net;
}

inline Matrix sigmoid_rows(const Matrix& z, const Eigen::RowVectorXd& b) {
    Matrix out = z.rowwise() + b;
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = sigmoid(out.data()[i]);
    return out;
}

inline Matrix sdne_encode(const SdneNet& net, const Matrix& X) {
    return sigmoid_rows(sigmoid_rows(X * net.W[0], net.b[0]) * net.W[1], net.b[1]);
}

/// Batch loss; X holds adjacency rows of the batch, S the adjacency among batch members.
///   sum_ij B_ij (xhat_ij - x_ij)^2 / |batch|, B_ij = beta where x_ij != 0 else 1
/// + alpha * sum_ab S_ab |y_a - y_b|^2 / |batch|
/// + nu1 * sum|W| + nu2/2 * sum W^2
/// Writes the exact gradient into `grad` when non-null.
inline double sdne_loss(const SdneNet& net, const Matrix& X, const Matrix& S, const SdneHyper& h, SdneNet* grad) {
    const double bs = static_cast<double>(std::max<Eigen::Index>(1, X.rows()));
    const Matrix h1 = sigmoid_rows(X * net.W[0], net.b[0]);
    const Matrix y = sigmoid_rows(h1 * net.W[1], net.b[1]);
    const Matrix h3 = sigmoid_rows(y * net.W[2], net.b[2]);
    const Matrix xh = sigmoid_rows(h3 * net.W[3], net.b[3]);

    const Matrix B = (X.array() != 0.0).select(Matrix::Constant(X.rows(), X.cols(), h.beta),
                                               Matrix::Ones(X.rows(), X.cols()));
    const Matrix diff = xh - X;
    double loss = (B.array() * diff.array().square()).sum() / bs;

    const Eigen::Index m = y.rows();
    double first = 0.0;
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index c = 0; c < m; ++c)
            if (S(a, c) != 0.0) first += S(a, c) * (y.row(a) - y.row(c)).squaredNorm();
    loss += h.alpha * first / bs;
    for (const auto& W : net.W) loss += h.nu1 * W.cwiseAbs().sum() + 0.5 * h.nu2 * W.squaredNorm();
    if (!grad) return loss;

    *grad = SdneNet::zeros_like(net);
    auto dsig = [](const Matrix& act) { return Matrix(act.array() * (1.0 - act.array())); };
    Matrix dz4 = (2.0 / bs) * (B.array() * diff.array() * dsig(xh).array()).matrix();
    grad->W[3] = h3.transpose() * dz4;
    grad->b[3] = dz4.colwise().sum();
    Matrix dz3 = ((dz4 * net.W[3].transpose()).array() * dsig(h3).array()).matrix();
    grad->W[2] = y.transpose() * dz3;
    grad->b[2] = dz3.colwise().sum();
    Matrix dy = dz3 * net.W[2].transpose();
    // d/dy_a sum S_ab |y_a - y_b|^2 = 2 sum_b (S_ab + S_ba)(y_a - y_b)
    const Matrix Ssym = S + S.transpose();
    const Eigen::VectorXd deg = Ssym.rowwise().sum();
    dy += (2.0 * h.alpha / bs) * (deg.asDiagonal() * y - Ssym * y);
    Matrix dz2 = (dy.array() * dsig(y).array()).matrix();
    grad->W[1] = h1.transpose() * dz2;
    grad->b[1] = dz2.colwise().sum();
    Matrix dz1 = ((dz2 * net.W[1].transpose()).array() * dsig(h1).array()).matrix();
    grad->W[0] = X.transpose() * dz1;
    grad->b[0] = dz1.colwise().sum();
    for (int l = 0; l < 4; ++l) {
        const Matrix& W = net.W[l];
        grad->W[l] += h.nu1 * W.unaryExpr([](double w) { return double((w > 0) - (w < 0)); }) + h.nu2 * W;
    }
    return loss;
}

inline SdneHyper sdne_hyper(const Config& cfg) { return {cfg.sdne_alpha, cfg.sdne_beta, cfg.sdne_nu1, cfg.sdne_nu2}; }

/// Mini-batch SGD over shuffled nodes. loss_curve[0] is the full-graph loss
/// before training, then one entry per epoch.
inline GraphResult sdne(const Adjacency& g, const Config& cfg, const Rng& rng) {
    const std::size_t n = g.size();
    GraphResult out;
    out.meta = {{"alpha", cfg.sdne_alpha}, {"beta", cfg.sdne_beta}, {"nu1", cfg.sdne_nu1}, {"nu2", cfg.sdne_nu2},
                {"batch_size", cfg.sdne_batch}, {"epoch", cfg.sdne_epochs}, {"hidden", cfg.sdne_hidden},
                {"dim", cfg.graph_dim}};
    if (n == 0) {
        out.vectors = Matrix(0, static_cast<Eigen::Index>(cfg.graph_dim));
        return out;
    }
    const Matrix A = dense_adjacency(g);
    Rng init = rng.split("init");
    SdneNet net = sdne_init(n, as_size(cfg.sdne_hidden), as_size(cfg.graph_dim), init);
    const SdneHyper hyp = sdne_hyper(cfg);
    const std::size_t bsz = std::max<std::size_t>(1, std::min(as_size(cfg.sdne_batch), n));
    const std::size_t batches = (n + bsz - 1) / bsz;
    const std::size_t epochs = as_size(cfg.sdne_epochs);
    const std::size_t total = batches * epochs;
    out.loss_curve.push_back(sdne_loss(net, A, A, hyp, nullptr));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    SdneNet grad;
    std::size_t step = 0;
    for (std::size_t e = 0; e < epochs; ++e) {
        Rng er = rng.split("epoch").split(static_cast<std::uint64_t>(e));
        er.shuffle(order);
        for (std::size_t bi = 0; bi < batches; ++bi) {
            const std::size_t lo = bi * bsz, hi = std::min(n, lo + bsz);
            const auto m = static_cast<Eigen::Index>(hi - lo);
            Matrix X(m, static_cast<Eigen::Index>(n)), S(m, m);
            for (Eigen::Index a = 0; a < m; ++a) {
                const auto ra = static_cast<Eigen::Index>(order[lo + static_cast<std::size_t>(a)]);
                X.row(a) = A.row(ra);
                for (Eigen::Index c = 0; c < m; ++c) S(a, c) = A(ra, static_cast<Eigen::Index>(order[lo + c]));
            }
            sdne_loss(net, X, S, hyp, &grad);
            const double lr = decayed_lr(cfg.sdne_lr, step++, total);
            for (int l = 0; l < 4; ++l) {
                net.W[l] -= lr * grad.W[l];
                net.b[l] -= lr * grad.b[l];
            }
        }
        out.loss_curve.push_back(sdne_loss(net, A, A, hyp, nullptr));
    }
    out.vectors = sdne_encode(net, A);
    return out;
}

} // namespace rmove::graph
