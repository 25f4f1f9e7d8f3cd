#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rmove/embedding.hpp"
#include "rmove/error.hpp"
#include "rmove/rng.hpp"

namespace rmove::graph {

inline double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// log(sigmoid(x)) without overflow.
inline double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

/// One negative-sampling example: center row in the input table, one positive
/// row and k negative rows in the output table.
struct SgnsSample {
    std::size_t center = 0;
    std::size_t positive = 0;
    std::vector<std::size_t> negatives;
};

/// loss = -log s(v.u_pos) - sum log s(-v.u_neg). Negatives equal to the positive are skipped.
/// coef[t] = label_t - s(v.u_t) for each term (positive first), the gradient scale.
inline double sgns_terms(const double* v, const Matrix& out, const SgnsSample& s, std::vector<double>& coef) {
    const Eigen::Index dim = out.cols();
    Eigen::Map<const Eigen::VectorXd> vv(v, dim);
    coef.assign(1 + s.negatives.size(), 0.0);
    const double pos = vv.dot(out.row(static_cast<Eigen::Index>(s.positive)).transpose());
    double loss = -log_sigmoid(pos);
    coef[0] = 1.0 - sigmoid(pos);
    for (std::size_t k = 0; k < s.negatives.size(); ++k) {
        if (s.negatives[k] == s.positive) continue;
        const double x = vv.dot(out.row(static_cast<Eigen::Index>(s.negatives[k])).transpose());
        loss -= log_sigmoid(-x);
        coef[k + 1] = -sigmoid(x);
    }
    return loss;
}

/// Summed loss over samples and its exact gradient. `in` and `out` may be the
/// same matrix (first-order LINE); then pass the same gradient matrix twice.
inline double sgns_objective(const Matrix& in, const Matrix& out, const std::vector<SgnsSample>& samples, Matrix* g_in,
                             Matrix* g_out) {
    if (g_in) g_in->setZero(in.rows(), in.cols());
    if (g_out && g_out != g_in) g_out->setZero(out.rows(), out.cols());
    std::vector<double> coef;
    double loss = 0.0;
    for (const auto& s : samples) {
        const auto c = static_cast<Eigen::Index>(s.center);
        const Eigen::VectorXd v = in.row(c).transpose();
        loss += sgns_terms(v.data(), out, s, coef);
        for (std::size_t t = 0; t < coef.size(); ++t) {
            if (coef[t] == 0.0) continue;
            const auto row = static_cast<Eigen::Index>(t == 0 ? s.positive : s.negatives[t - 1]);
            if (g_in) g_in->row(c) -= coef[t] * out.row(row);
            if (g_out) g_out->row(row) -= coef[t] * v.transpose();
        }
    }
    return loss;
}

/// One SGD step on a single sample, gradient taken at the current parameters.
inline void sgns_step(Matrix& in, Matrix& out, const SgnsSample& s, double lr, std::vector<double>& coef,
                      Eigen::VectorXd& scratch) {
    const auto c = static_cast<Eigen::Index>(s.center);
    const Eigen::VectorXd v = in.row(c).transpose();
    sgns_terms(v.data(), out, s, coef);
    scratch.setZero(in.cols());
    for (std::size_t t = 0; t < coef.size(); ++t) {
        if (coef[t] == 0.0) continue;
        const auto row = static_cast<Eigen::Index>(t == 0 ? s.positive : s.negatives[t - 1]);
        scratch += coef[t] * out.row(row).transpose();
        out.row(row) += lr * coef[t] * v.transpose();
    }
    in.row(c) += lr * scratch.transpose();
}

/// Cumulative table for draws proportional to weight^0.75.
class NegativeSampler {
public:
    NegativeSampler() = default;
    explicit NegativeSampler(const std::vector<double>& weights) {
        cdf_.reserve(weights.size());
        double acc = 0.0;
        for (double w : weights) {
            acc += w > 0 ? std::pow(w, 0.75) : 0.0;
            cdf_.push_back(acc);
        }
        total_ = acc;
    }
    bool empty() const noexcept { return total_ <= 0.0; }
    std::size_t draw(Rng& rng) const {
        const double r = rng.uniform() * total_;
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), r);
        if (it == cdf_.end()) --it;
        return static_cast<std::size_t>(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
    double total_ = 0.0;
};

/// Linear decay to 1e-4 of the initial rate.
inline double decayed_lr(double lr0, std::size_t step, std::size_t total) {
    if (total == 0) return lr0;
    return lr0 * std::max(1e-4, 1.0 - static_cast<double>(step) / static_cast<double>(total));
}

struct SkipGramParams {
    std::size_t dim = 128;
    std::size_t window = 10;
    std::size_t negatives = 5;
    std::size_t epochs = 5;
    double lr = 0.025;
};

struct SkipGramResult {
    Matrix vectors;                   // input-side vectors
    std::vector<double> heldout_loss; // mean loss on the held-out pairs after each epoch
    std::size_t train_pairs = 0;
    std::size_t heldout_pairs = 0;
};

/// Rows are uniform in [-0.5/dim, 0.5/dim]; nodes that never appear in a
/// training pair keep this vector.
inline Matrix init_vectors(std::size_t n, std::size_t dim, Rng& rng) {
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = (rng.uniform() - 0.5) / static_cast<double>(dim);
    return m;
}

/// Skip-gram with negative sampling over `n` symbols. A fixed window of pairs is
/// used; about 5% of (center, context) pairs are held out for the loss curve.
inline SkipGramResult skipgram_train(const std::vector<std::vector<std::size_t>>& walks, std::size_t n,
                                     const SkipGramParams& prm, const Rng& rng) {
    if (walks.empty()) fail(ErrorKind::EmptyWalkCorpus, "skip-gram needs at least one walk");
    if (prm.window < 1 || prm.negatives < 1) fail(ErrorKind::InvalidConfig, "window and negatives must be >= 1");
    if (prm.dim < 1) fail(ErrorKind::InvalidConfig, "dimension must be >= 1");
    Rng init = rng.split("init");
    SkipGramResult res;
    res.vectors = init_vectors(n, prm.dim, init);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(prm.dim));

    std::vector<double> freq(n, 0.0);
    for (const auto& w : walks)
        for (auto v : w) freq[v] += 1.0;
    const NegativeSampler sampler(freq);

    const std::uint64_t salt = rng.split("holdout").seed();
    auto held_out = [&](std::size_t w, std::size_t i, std::size_t j) {
        return splitmix64(salt ^ splitmix64(w * 0x9e3779b97f4a7c15ULL + i * 1315423911ULL + j)) % 20 == 0;
    };
    std::vector<SgnsSample> heldout;
    Rng hr = rng.split("heldout-negatives");
    for (std::size_t w = 0; w < walks.size(); ++w) {
        const auto& walk = walks[w];
        for (std::size_t i = 0; i < walk.size(); ++i) {
            const std::size_t lo = i >= prm.window ? i - prm.window : 0;
            const std::size_t hi = std::min(walk.size(), i + prm.window + 1);
            for (std::size_t j = lo; j < hi; ++j) {
                if (j == i) continue;
                if (held_out(w, i, j)) {
                    SgnsSample s{walk[i], walk[j], {}};
                    for (std::size_t k = 0; k < prm.negatives; ++k) s.negatives.push_back(sampler.draw(hr));
                    heldout.push_back(std::move(s));
                } else {
                    ++res.train_pairs;
                }
            }
        }
    }
    res.heldout_pairs = heldout.size();

    const std::size_t total = res.train_pairs * prm.epochs;
    std::size_t step = 0;
    std::vector<double> coef;
    Eigen::VectorXd scratch;
    SgnsSample s;
    s.negatives.resize(prm.negatives);
    for (std::size_t e = 0; e < prm.epochs; ++e) {
        Rng er = rng.split("epoch").split(e);
        for (std::size_t w = 0; w < walks.size(); ++w) {
            const auto& walk = walks[w];
            for (std::size_t i = 0; i < walk.size(); ++i) {
                const std::size_t lo = i >= prm.window ? i - prm.window : 0;
                const std::size_t hi = std::min(walk.size(), i + prm.window + 1);
                for (std::size_t j = lo; j < hi; ++j) {
                    if (j == i || held_out(w, i, j)) continue;
                    s.center = walk[i];
                    s.positive = walk[j];
                    for (auto& neg : s.negatives) neg = sampler.draw(er);
                    sgns_step(res.vectors, out, s, decayed_lr(prm.lr, step++, total), coef, scratch);
                }
            }
        }
        if (!heldout.empty())
            res.heldout_loss.push_back(sgns_objective(res.vectors, out, heldout, nullptr, nullptr) /
                                       static_cast<double>(heldout.size()));
    }
    return res;
}

} // namespace rmove::graph
