#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "negspec/error.hpp"
#include "negspec/laplacian.hpp"
#include "negspec/similarity.hpp"

namespace negspec {

/// Eigenvectors of the k smallest eigenvalues, one per column, with the
/// eigenvalues in ascending order.
struct SpectralEmbedding {
    Eigen::MatrixXd coords;
    Eigen::VectorXd eigenvalues;

    Eigen::Index rows() const noexcept { return coords.rows(); }
    Eigen::Index dims() const noexcept { return coords.cols(); }
};

/// Flips each column so its entry of largest magnitude (first one on ties)
/// is positive.
inline void canonicalize_signs(Eigen::MatrixXd& columns) {
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < columns.rows(); ++i) {
            const double a = std::abs(columns(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (columns.rows() > 0 && columns(arg, j) < 0.0) columns.col(j) *= -1.0;
    }
}

/// k smallest eigenpairs of a symmetric matrix via a full dense
/// decomposition. Eigenvectors of repeated eigenvalues are an arbitrary
/// orthonormal basis of their eigenspace.
template <typename Derived>
SpectralEmbedding eig_smallest(const Eigen::MatrixBase<Derived>& m_in, Eigen::Index k) {
    if (m_in.rows() != m_in.cols()) throw Error("eig_smallest: matrix must be square");
    const Eigen::Index n = m_in.rows();
    if (k < 1 || k > n)
        throw Error("eig_smallest: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    const Eigen::MatrixXd m = detail::symmetrized(m_in, "eig_smallest");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw Error("eig_smallest: eigendecomposition did not converge");

    SpectralEmbedding out;
    out.coords = solver.eigenvectors().leftCols(k);
    out.eigenvalues = solver.eigenvalues().head(k);
    canonicalize_signs(out.coords);
    return out;
}

inline SpectralEmbedding eig_smallest(const Laplacian& l, Eigen::Index k) { return eig_smallest(l.values(), k); }

/// Laplacian construction followed by eig_smallest. Construction errors such
/// as NegativeDegree propagate unchanged.
inline SpectralEmbedding spectral_embed(const SimilarityMatrix& s, LaplacianKind kind, Eigen::Index k,
                                        double alpha = 1.0) {
    return eig_smallest(build_laplacian(s, kind, alpha), k);
}

}  // namespace negspec
