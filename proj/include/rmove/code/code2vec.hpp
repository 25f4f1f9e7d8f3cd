#pragma once

#include <vector>

#include "rmove/code/nn.hpp"
#include "rmove/code/vocab.hpp"

namespace rmove::code {

struct EncoderDims {
    std::size_t token = 128;
    std::size_t path = 128;
    std::size_t code = 128;
};

/// Per-method forward output.
struct Encoded {
    Eigen::RowVectorXd vector;
    Eigen::VectorXd attention;
    Eigen::VectorXd probs;
    double loss = 0.0;
};

/// Whole-path symbols, context c = tanh([E_tok[s]; E_path[p]; E_tok[e]] W).
class Code2Vec {
public:
    static constexpr const char* kTag = "CODE2VEC";
    enum Block : std::size_t { Tok, Path, W, Attn, Out };

    ParamSet params;

    Code2Vec() = default;
    Code2Vec(const Vocabulary& v, const EncoderDims& d, Rng& rng) : dims_(d) {
        const auto dt = static_cast<Eigen::Index>(d.token), dp = static_cast<Eigen::Index>(d.path),
                   dc = static_cast<Eigen::Index>(d.code);
        params.add("token_embedding", uniform_matrix(static_cast<Eigen::Index>(v.tokens.size()), dt, 0.5, rng));
        params.add("path_embedding", uniform_matrix(static_cast<Eigen::Index>(v.paths.size()), dp, 0.5, rng));
        params.add("transform", glorot(2 * dt + dp, dc, rng));
        params.add("attention", glorot(dc, 1, rng));
        params.add("target_embedding", glorot(static_cast<Eigen::Index>(v.targets.size()), dc, rng));
    }

    std::size_t dim() const noexcept { return dims_.code; }

    /// Zero-context methods return an empty attention vector and zero method vector.
    Encoded encode(const EncodedMethod& m) const { return forward(m, nullptr, 0.0); }

    /// Loss for one method; gradients scaled by `scale` accumulate into `grad` when non-null.
    Encoded forward(const EncodedMethod& m, ParamSet* grad, double scale, const Dropout* drop = nullptr) const {
        Encoded out;
        if (m.contexts.empty()) {
            out.vector = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dims_.code));
            return out;
        }
        const Matrix X = inputs(m);
        const Matrix C = (X * params[W]).array().tanh().matrix();
        const Matrix mask = drop ? drop->mask(C.rows(), C.cols()) : Matrix();
        Matrix dC, da = Matrix::Zero(params[Attn].rows(), 1), dO = Matrix::Zero(params[Out].rows(), params[Out].cols());
        auto h = attention_head(mask.size() ? Matrix(C.cwiseProduct(mask)) : C, params[Attn], params[Out], m.target, grad != nullptr, &dC, &da, &dO);
        out.vector = h.vector;
        out.attention = h.attention;
        out.probs = h.probs;
        out.loss = h.loss;
        if (!grad) return out;

        auto& g = *grad;
        g[Attn] += scale * da;
        g[Out] += scale * dO;
        if (mask.size()) dC = dC.cwiseProduct(mask);
        const Matrix dpre = scale * (dC.array() * (1.0 - C.array().square())).matrix();
        g[W] += X.transpose() * dpre;
        const Matrix dX = dpre * params[W].transpose();
        const auto dt = static_cast<Eigen::Index>(dims_.token), dp = static_cast<Eigen::Index>(dims_.path);
        for (std::size_t i = 0; i < m.contexts.size(); ++i) {
            const auto& c = m.contexts[i];
            const auto r = static_cast<Eigen::Index>(i);
            g[Tok].row(c.start) += dX.row(r).segment(0, dt);
            g[Path].row(c.path) += dX.row(r).segment(dt, dp);
            g[Tok].row(c.end) += dX.row(r).segment(dt + dp, dt);
        }
        return out;
    }

private:
    Matrix inputs(const EncodedMethod& m) const {
        const auto dt = static_cast<Eigen::Index>(dims_.token), dp = static_cast<Eigen::Index>(dims_.path);
        Matrix X(static_cast<Eigen::Index>(m.contexts.size()), 2 * dt + dp);
        for (std::size_t i = 0; i < m.contexts.size(); ++i) {
            const auto& c = m.contexts[i];
            const auto r = static_cast<Eigen::Index>(i);
            X.row(r).segment(0, dt) = params[Tok].row(c.start);
            X.row(r).segment(dt, dp) = params[Path].row(c.path);
            X.row(r).segment(dt + dp, dt) = params[Tok].row(c.end);
        }
        return X;
    }

    EncoderDims dims_;
};

/// Mean cross-entropy over the methods of `batch` that have contexts.
template <class Model>
double mean_loss(const Model& model, const std::vector<const EncodedMethod*>& batch, ParamSet* grad,
                 const Dropout* drop = nullptr) {
    std::size_t counted = 0;
    for (const auto* m : batch)
        if (!m->contexts.empty()) ++counted;
    if (counted == 0) return 0.0;
    const double scale = 1.0 / static_cast<double>(counted);
    double total = 0.0;
    for (const auto* m : batch)
        if (!m->contexts.empty()) total += model.forward(*m, grad, scale, drop).loss;
    return total * scale;
}

} // namespace rmove::code
