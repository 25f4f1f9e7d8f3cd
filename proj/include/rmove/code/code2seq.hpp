#pragma once

#include <array>
#include <map>
#include <vector>

#include "rmove/code/code2vec.hpp"

namespace rmove::code {

/// Tokens are sums of subtoken vectors; a path is the last state of a GRU run
/// over its node-type vectors; c = tanh([h_path; tok_s; tok_e] W).
class Code2Seq {
public:
    static constexpr const char* kTag = "CODE2SEQ";
    enum Block : std::size_t { Sub, Node, Wz, Wr, Wn, Uz, Ur, Un, Bz, Br, Bn, W, Attn, Out };

    ParamSet params;

    Code2Seq() = default;
    Code2Seq(const Vocabulary& v, const EncoderDims& d, Rng& rng) : dims_(d) {
        const auto dt = static_cast<Eigen::Index>(d.token), dh = static_cast<Eigen::Index>(d.path),
                   dc = static_cast<Eigen::Index>(d.code);
        params.add("subtoken_embedding", uniform_matrix(static_cast<Eigen::Index>(v.subtokens.size()), dt, 0.5, rng));
        params.add("node_embedding", uniform_matrix(static_cast<Eigen::Index>(v.node_types.size()), dh, 0.5, rng));
        for (const char* n : {"gru_wz", "gru_wr", "gru_wn", "gru_uz", "gru_ur", "gru_un"}) params.add(n, glorot(dh, dh, rng));
        for (const char* n : {"gru_bz", "gru_br", "gru_bn"}) params.add(n, Matrix::Zero(1, dh));
        params.add("transform", glorot(dh + 2 * dt, dc, rng));
        params.add("attention", glorot(dc, 1, rng));
        params.add("target_embedding", glorot(static_cast<Eigen::Index>(v.targets.size()), dc, rng));
    }

    std::size_t dim() const noexcept { return dims_.code; }

    Encoded encode(const EncodedMethod& m) const { return forward(m, nullptr, 0.0); }

    /// Final GRU states for node sequences; row i belongs to seqs[i].
    Matrix encode_paths(const std::vector<std::vector<int>>& seqs) const {
        return gru(seqs).back().h;
    }

    Encoded forward(const EncodedMethod& m, ParamSet* grad, double scale, const Dropout* drop = nullptr) const {
        Encoded out;
        if (m.contexts.empty()) {
            out.vector = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dims_.code));
            return out;
        }
        // identical node sequences within a method share one recurrent pass
        std::map<std::vector<int>, std::size_t> uniq;
        std::vector<std::vector<int>> seqs;
        std::vector<std::size_t> seq_of(m.contexts.size());
        for (std::size_t i = 0; i < m.contexts.size(); ++i) {
            auto [it, fresh] = uniq.emplace(m.contexts[i].nodes, seqs.size());
            if (fresh) seqs.push_back(m.contexts[i].nodes);
            seq_of[i] = it->second;
        }
        const auto steps = gru(seqs);
        const Matrix& H = steps.back().h;

        const auto dt = static_cast<Eigen::Index>(dims_.token), dh = static_cast<Eigen::Index>(dims_.path);
        Matrix X(static_cast<Eigen::Index>(m.contexts.size()), dh + 2 * dt);
        for (std::size_t i = 0; i < m.contexts.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            X.row(r).segment(0, dh) = H.row(static_cast<Eigen::Index>(seq_of[i]));
            X.row(r).segment(dh, dt) = token_vector(m.contexts[i].start_sub);
            X.row(r).segment(dh + dt, dt) = token_vector(m.contexts[i].end_sub);
        }
        const Matrix C = (X * params[W]).array().tanh().matrix();
        const Matrix mask = drop ? drop->mask(C.rows(), C.cols()) : Matrix();
        Matrix dC, da = Matrix::Zero(params[Attn].rows(), 1), dO = Matrix::Zero(params[Out].rows(), params[Out].cols());
        auto head = attention_head(mask.size() ? Matrix(C.cwiseProduct(mask)) : C, params[Attn], params[Out], m.target, grad != nullptr, &dC, &da, &dO);
        out.vector = head.vector;
        out.attention = head.attention;
        out.probs = head.probs;
        out.loss = head.loss;
        if (!grad) return out;

        auto& g = *grad;
        g[Attn] += scale * da;
        g[Out] += scale * dO;
        if (mask.size()) dC = dC.cwiseProduct(mask);
        const Matrix dpre = scale * (dC.array() * (1.0 - C.array().square())).matrix();
        g[W] += X.transpose() * dpre;
        const Matrix dX = dpre * params[W].transpose();
        Matrix dH = Matrix::Zero(H.rows(), dh);
        for (std::size_t i = 0; i < m.contexts.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            dH.row(static_cast<Eigen::Index>(seq_of[i])) += dX.row(r).segment(0, dh);
            for (int s : m.contexts[i].start_sub) g[Sub].row(s) += dX.row(r).segment(dh, dt);
            for (int s : m.contexts[i].end_sub) g[Sub].row(s) += dX.row(r).segment(dh + dt, dt);
        }
        gru_backward(seqs, steps, dH, g);
        return out;
    }

private:
    struct Step {
        Matrix x, h_prev, z, r, n, h;
        Eigen::VectorXd mask; // 1 where the sequence is still running
    };

    Eigen::RowVectorXd token_vector(const std::vector<int>& subs) const {
        Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dims_.token));
        for (int s : subs) v += params[Sub].row(s);
        return v;
    }

    static Matrix sigmoid(const Matrix& m) { return (1.0 / (1.0 + (-m.array()).exp())).matrix(); }

    /// Runs all sequences together; finished rows carry their state unchanged.
    /// The returned list always holds at least one entry (the zero state).
    std::vector<Step> gru(const std::vector<std::vector<int>>& seqs) const {
        const auto S = static_cast<Eigen::Index>(seqs.size()), dh = static_cast<Eigen::Index>(dims_.path);
        std::size_t T = 0;
        for (const auto& s : seqs) T = std::max(T, s.size());
        std::vector<Step> steps;
        Matrix h = Matrix::Zero(S, dh);
        if (T == 0) {
            Step st;
            st.h = h;
            steps.push_back(std::move(st));
            return steps;
        }
        for (std::size_t t = 0; t < T; ++t) {
            Step st;
            st.x = Matrix::Zero(S, dh);
            st.mask = Eigen::VectorXd::Zero(S);
            for (Eigen::Index i = 0; i < S; ++i) {
                const auto& s = seqs[static_cast<std::size_t>(i)];
                if (t < s.size()) {
                    st.x.row(i) = params[Node].row(s[t]);
                    st.mask(i) = 1.0;
                }
            }
            st.h_prev = h;
            st.z = sigmoid((st.x * params[Wz] + h * params[Uz]).rowwise() + params[Bz].row(0));
            st.r = sigmoid((st.x * params[Wr] + h * params[Ur]).rowwise() + params[Br].row(0));
            const Matrix rh = (st.r.array() * h.array()).matrix();
            st.n = ((st.x * params[Wn] + rh * params[Un]).rowwise() + params[Bn].row(0)).array().tanh().matrix();
            const Matrix next = ((1.0 - st.z.array()) * st.n.array() + st.z.array() * h.array()).matrix();
            for (Eigen::Index i = 0; i < S; ++i)
                if (st.mask(i) != 0.0) h.row(i) = next.row(i);
            st.h = h;
            steps.push_back(std::move(st));
        }
        return steps;
    }

    void gru_backward(const std::vector<std::vector<int>>& seqs, const std::vector<Step>& steps, Matrix dH,
                      ParamSet& g) const {
        if (steps.front().mask.size() == 0) return; // only empty sequences
        for (std::size_t t = steps.size(); t-- > 0;) {
            const Step& st = steps[t];
            const Matrix dHn = st.mask.asDiagonal() * dH;
            const Matrix pass = (1.0 - st.mask.array()).matrix().asDiagonal() * dH;
            const Matrix& hp = st.h_prev;
            const Matrix dNpre = (dHn.array() * (1.0 - st.z.array()) * (1.0 - st.n.array().square())).matrix();
            const Matrix dZpre =
                (dHn.array() * (hp.array() - st.n.array()) * st.z.array() * (1.0 - st.z.array())).matrix();
            const Matrix rh = (st.r.array() * hp.array()).matrix();
            g[Wn] += st.x.transpose() * dNpre;
            g[Un] += rh.transpose() * dNpre;
            g[Bn] += dNpre.colwise().sum();
            const Matrix dRH = dNpre * params[Un].transpose();
            const Matrix dRpre = (dRH.array() * hp.array() * st.r.array() * (1.0 - st.r.array())).matrix();
            g[Wz] += st.x.transpose() * dZpre;
            g[Uz] += hp.transpose() * dZpre;
            g[Bz] += dZpre.colwise().sum();
            g[Wr] += st.x.transpose() * dRpre;
            g[Ur] += hp.transpose() * dRpre;
            g[Br] += dRpre.colwise().sum();
            const Matrix dX = dZpre * params[Wz].transpose() + dRpre * params[Wr].transpose() +
                              dNpre * params[Wn].transpose();
            for (std::size_t i = 0; i < seqs.size(); ++i)
                if (t < seqs[i].size()) g[Node].row(seqs[i][t]) += dX.row(static_cast<Eigen::Index>(i));
            dH = pass + (dHn.array() * st.z.array()).matrix() + (dRH.array() * st.r.array()).matrix() +
                 dZpre * params[Uz].transpose() + dRpre * params[Ur].transpose();
        }
    }

    EncoderDims dims_;
};

} // namespace rmove::code
