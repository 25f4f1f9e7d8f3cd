#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rmove/embedding.hpp"
#include "rmove/rng.hpp"

namespace rmove::code {

/// Named dense parameter blocks; gradients and optimizer moments share the layout.
struct ParamSet {
    std::vector<std::string> names;
    std::vector<Matrix> blocks;

    std::size_t add(std::string name, Matrix m) {
        names.push_back(std::move(name));
        blocks.push_back(std::move(m));
        return blocks.size() - 1;
    }
    Matrix& operator[](std::size_t i) { return blocks[i]; }
    const Matrix& operator[](std::size_t i) const { return blocks[i]; }
    std::size_t size() const noexcept { return blocks.size(); }

    ParamSet zeros_like() const {
        ParamSet z;
        for (std::size_t i = 0; i < size(); ++i) z.add(names[i], Matrix::Zero(blocks[i].rows(), blocks[i].cols()));
        return z;
    }
    void set_zero() {
        for (auto& b : blocks) b.setZero();
    }
};

inline Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
    return m;
}

inline Matrix glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    return uniform_matrix(rows, cols, std::sqrt(6.0 / static_cast<double>(rows + cols)), rng);
}

class Adam {
public:
    explicit Adam(const ParamSet& p, double lr) : lr_(lr), m_(p.zeros_like()), v_(p.zeros_like()) {}

    void step(ParamSet& p, const ParamSet& g, double scale = 1.0) {
        ++t_;
        const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
        for (std::size_t i = 0; i < p.size(); ++i) {
            auto gi = (scale * g[i].array()).eval();
            m_[i].array() = b1_ * m_[i].array() + (1 - b1_) * gi;
            v_[i].array() = b2_ * v_[i].array() + (1 - b2_) * gi.square();
            p[i].array() -= lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
        }
    }

private:
    double lr_;
    double b1_ = 0.9, b2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    ParamSet m_, v_;
};

/// Inverted dropout on context vectors during training.
struct Dropout {
    double rate = 0.0;
    Rng* rng = nullptr;

    Matrix mask(Eigen::Index rows, Eigen::Index cols) const {
        Matrix m(rows, cols);
        const double keep = 1.0 - rate;
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng->uniform() < keep ? 1.0 / keep : 0.0;
        return m;
    }
};

/// Attention pooling and name prediction shared by both encoders.
///   alpha = softmax(C a), v = alpha^T C, p = softmax(O v), loss = -log p[target]
struct HeadResult {
    double loss = 0.0;
    Eigen::RowVectorXd vector;
    Eigen::VectorXd attention;
    Eigen::VectorXd probs;
};

/// Fills dC, da, dO (accumulated) when `want_grad`; target < 0 skips the loss.
inline HeadResult attention_head(const Matrix& C, const Matrix& a, const Matrix& O, int target, bool want_grad,
                                 Matrix* dC, Matrix* da, Matrix* dO) {
    HeadResult r;
    const Eigen::VectorXd scores = C * a.col(0);
    const double mx = scores.maxCoeff();
    r.attention = (scores.array() - mx).exp();
    r.attention /= r.attention.sum();
    r.vector = r.attention.transpose() * C;
    const Eigen::VectorXd logits = O * r.vector.transpose();
    const double lm = logits.maxCoeff();
    r.probs = (logits.array() - lm).exp();
    const double z = r.probs.sum();
    r.probs /= z;
    if (target < 0) return r;
    r.loss = -(logits(target) - lm - std::log(z));
    if (!want_grad) return r;

    Eigen::VectorXd dlogits = r.probs;
    dlogits(target) -= 1.0;
    *dO += dlogits * r.vector;
    const Eigen::RowVectorXd dv = dlogits.transpose() * O;
    // v = sum alpha_i c_i
    *dC = r.attention * dv;
    const Eigen::VectorXd dalpha = C * dv.transpose();
    const double mean = r.attention.dot(dalpha);
    const Eigen::VectorXd dscore = r.attention.array() * (dalpha.array() - mean);
    *dC += dscore * a.col(0).transpose();
    da->col(0) += C.transpose() * dscore;
    return r;
}

} // namespace rmove::code
