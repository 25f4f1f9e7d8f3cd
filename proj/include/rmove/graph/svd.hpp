#pragma once

#include <algorithm>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "rmove/embedding.hpp"
#include "rmove/rng.hpp"

namespace rmove::graph {

/// Rank-r factors M ~ U diag(S) V^T. Columns beyond the numerical size of M are zero.
struct Svd {
    Matrix U;
    Eigen::VectorXd S;
    Matrix V;
};

namespace detail {

inline Svd pad(const Matrix& U, const Eigen::VectorXd& S, const Matrix& V, Eigen::Index rows, Eigen::Index cols,
               Eigen::Index r) {
    Svd out{Matrix::Zero(rows, r), Eigen::VectorXd::Zero(r), Matrix::Zero(cols, r)};
    const Eigen::Index k = std::min<Eigen::Index>(r, S.size());
    out.U.leftCols(k) = U.leftCols(k);
    out.S.head(k) = S.head(k);
    out.V.leftCols(k) = V.leftCols(k);
    return out;
}

inline Matrix orthonormal_basis(const Matrix& A) {
    Eigen::HouseholderQR<Matrix> qr(A);
    return qr.householderQ() * Matrix::Identity(A.rows(), std::min(A.rows(), A.cols()));
}

} // namespace detail

inline Svd truncated_svd(const Matrix& M, Eigen::Index r) {
    if (M.size() == 0) return detail::pad(Matrix(), Eigen::VectorXd(), Matrix(), M.rows(), M.cols(), r);
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return detail::pad(svd.matrixU(), svd.singularValues(), svd.matrixV(), M.rows(), M.cols(), r);
}

/// Randomized range finder with power iterations, then an exact SVD of the small projection.
inline Svd randomized_svd(const Matrix& M, Eigen::Index r, int n_iter, Eigen::Index oversample, Rng& rng) {
    const Eigen::Index l = std::min<Eigen::Index>(r + oversample, std::min(M.rows(), M.cols()));
    if (l <= 0) return detail::pad(Matrix(), Eigen::VectorXd(), Matrix(), M.rows(), M.cols(), r);
    Matrix omega(M.cols(), l);
    for (Eigen::Index i = 0; i < omega.size(); ++i) omega.data()[i] = rng.normal();
    Matrix Q = detail::orthonormal_basis(M * omega);
    for (int i = 0; i < n_iter; ++i) {
        Matrix Z = detail::orthonormal_basis(M.transpose() * Q);
        Q = detail::orthonormal_basis(M * Z);
    }
    const Matrix B = Q.transpose() * M;
    Eigen::BDCSVD<Matrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix U = Q * svd.matrixU();
    return detail::pad(U, svd.singularValues(), svd.matrixV(), M.rows(), M.cols(), r);
}

/// U * sqrt(S): the usual node-side factor.
inline Matrix scaled_left(const Svd& s) { return s.U * s.S.cwiseSqrt().asDiagonal(); }

/// Row-wise L2 normalization; zero rows stay zero.
inline void l2_normalize_rows(Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double n = m.row(i).norm();
        if (n > 0) m.row(i) /= n;
    }
}

} // namespace rmove::graph
