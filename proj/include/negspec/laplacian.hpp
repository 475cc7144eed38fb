#pragma once

// Laplacian constructions over a (possibly signed) similarity matrix.
//
// Every builder accepts either a SimilarityMatrix or any square Eigen
// expression. Raw Eigen input is symmetrized with the same tolerance as
// SimilarityMatrix but its diagonal is left alone, so matrices such as
// S + cJ can be studied directly. Degrees are always plain row sums.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "negspec/error.hpp"
#include "negspec/similarity.hpp"

namespace negspec {

enum class LaplacianKind { combinatorial, normalized, rationormalized, signed_, perturbed };

inline std::string_view to_string(LaplacianKind k) {
    switch (k) {
        case LaplacianKind::combinatorial: return "combinatorial";
        case LaplacianKind::normalized: return "normalized";
        case LaplacianKind::rationormalized: return "rationormalized";
        case LaplacianKind::signed_: return "signed";
        case LaplacianKind::perturbed: return "perturbed";
    }
    return "?";
}

inline LaplacianKind parse_laplacian(std::string_view name) {
    for (auto k : {LaplacianKind::combinatorial, LaplacianKind::normalized, LaplacianKind::rationormalized,
                   LaplacianKind::signed_, LaplacianKind::perturbed})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown laplacian '" + std::string(name) +
                      "' (expected combinatorial, normalized, rationormalized, signed or perturbed)");
}

/// d_i = sum_l s_il.
using DegreeVector = Eigen::VectorXd;

class Laplacian {
public:
    Laplacian(LaplacianKind kind, Eigen::MatrixXd values, std::optional<double> parameter = std::nullopt)
        : kind_(kind), values_(std::move(values)), parameter_(parameter) {}

    LaplacianKind kind() const noexcept { return kind_; }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    Eigen::Index size() const noexcept { return values_.rows(); }
    /// alpha of a perturbed Laplacian.
    const std::optional<double>& parameter() const noexcept { return parameter_; }

private:
    LaplacianKind kind_;
    Eigen::MatrixXd values_;
    std::optional<double> parameter_;
};

namespace detail {

template <typename Derived>
Eigen::MatrixXd symmetrized(const Eigen::MatrixBase<Derived>& m, std::string_view op) {
    if (m.rows() != m.cols()) throw Error(std::string(op) + ": matrix must be square");
    Eigen::MatrixXd s = m;
    if (!s.allFinite()) throw Error(std::string(op) + ": matrix has non-finite entries");
    if (s.size() == 0) return s;
    const double tol = SimilarityMatrix::kSymmetryTolerance * std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol) throw Error(std::string(op) + ": matrix is not symmetric");
    return 0.5 * (s + s.transpose());
}

inline Eigen::MatrixXd scale_both_sides(const Eigen::MatrixXd& s, const Eigen::VectorXd& inv_sqrt) {
    return inv_sqrt.asDiagonal() * s * inv_sqrt.asDiagonal();
}

inline Eigen::MatrixXd exact_symmetric(Eigen::MatrixXd m) {
    return 0.5 * (m + m.transpose());
}

inline std::vector<std::size_t> non_positive(const Eigen::VectorXd& v) {
    std::vector<std::size_t> out;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!(v(i) > 0.0)) out.push_back(static_cast<std::size_t>(i));
    return out;
}

}  // namespace detail

template <typename Derived>
DegreeVector degree(const Eigen::MatrixBase<Derived>& s) {
    return s.rowwise().sum();
}

inline DegreeVector degree(const SimilarityMatrix& s) { return degree(s.values()); }

/// L = D - S.
template <typename Derived>
Laplacian combinatorial_laplacian(const Eigen::MatrixBase<Derived>& s_in) {
    const Eigen::MatrixXd s = detail::symmetrized(s_in, "combinatorial_laplacian");
    Eigen::MatrixXd l = -s;
    l.diagonal() += degree(s);
    return Laplacian(LaplacianKind::combinatorial, std::move(l));
}

/// I - D^{-1/2} S D^{-1/2}. Throws NegativeDegree when any d_i <= 0.
template <typename Derived>
Laplacian normalized_laplacian(const Eigen::MatrixBase<Derived>& s_in) {
    const Eigen::MatrixXd s = detail::symmetrized(s_in, "normalized_laplacian");
    const DegreeVector d = degree(s);
    if (auto bad = detail::non_positive(d); !bad.empty())
        throw NegativeDegree("normalized_laplacian: non-positive degree at rows " + detail::join_indices(bad),
                             bad);
    const Eigen::VectorXd inv_sqrt = d.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd l = -detail::scale_both_sides(s, inv_sqrt);
    l.diagonal().array() += 1.0;
    return Laplacian(LaplacianKind::normalized, detail::exact_symmetric(std::move(l)));
}

/// I - D'^{-1/2} S' D'^{-1/2} with S' = S + I and D' = D + I.
/// Throws NegativeDegree when any d_i <= -1.
template <typename Derived>
Laplacian rationormalized_laplacian(const Eigen::MatrixBase<Derived>& s_in) {
    Eigen::MatrixXd s = detail::symmetrized(s_in, "rationormalized_laplacian");
    const DegreeVector d_shift = degree(s).array() + 1.0;
    if (auto bad = detail::non_positive(d_shift); !bad.empty())
        throw NegativeDegree("rationormalized_laplacian: degree <= -1 at rows " + detail::join_indices(bad),
                             bad);
    s.diagonal().array() += 1.0;
    const Eigen::VectorXd inv_sqrt = d_shift.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd l = -detail::scale_both_sides(s, inv_sqrt);
    l.diagonal().array() += 1.0;
    return Laplacian(LaplacianKind::rationormalized, detail::exact_symmetric(std::move(l)));
}

/// diag(sum_l |s_il|) - S. Positive semi-definite for any symmetric S with
/// zero diagonal.
template <typename Derived>
Laplacian signed_laplacian(const Eigen::MatrixBase<Derived>& s_in) {
    const Eigen::MatrixXd s = detail::symmetrized(s_in, "signed_laplacian");
    Eigen::MatrixXd l = -s;
    l.diagonal() += s.cwiseAbs().rowwise().sum();
    return Laplacian(LaplacianKind::signed_, std::move(l));
}

/// (D + alpha I) - S: the combinatorial spectrum shifted by alpha.
template <typename Derived>
Laplacian perturbed_laplacian(const Eigen::MatrixBase<Derived>& s_in, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error("perturbed_laplacian: alpha must be finite and > 0, got " + std::to_string(alpha));
    const Eigen::MatrixXd s = detail::symmetrized(s_in, "perturbed_laplacian");
    Eigen::MatrixXd l = -s;
    l.diagonal() += degree(s);
    l.diagonal().array() += alpha;
    return Laplacian(LaplacianKind::perturbed, std::move(l), alpha);
}

inline Laplacian combinatorial_laplacian(const SimilarityMatrix& s) { return combinatorial_laplacian(s.values()); }
inline Laplacian normalized_laplacian(const SimilarityMatrix& s) { return normalized_laplacian(s.values()); }
inline Laplacian rationormalized_laplacian(const SimilarityMatrix& s) {
    return rationormalized_laplacian(s.values());
}
inline Laplacian signed_laplacian(const SimilarityMatrix& s) { return signed_laplacian(s.values()); }
inline Laplacian perturbed_laplacian(const SimilarityMatrix& s, double alpha) {
    return perturbed_laplacian(s.values(), alpha);
}

/// Builds the Laplacian of the requested kind; `alpha` is used only by the
/// perturbed kind.
inline Laplacian build_laplacian(const SimilarityMatrix& s, LaplacianKind kind, double alpha = 1.0) {
    switch (kind) {
        case LaplacianKind::combinatorial: return combinatorial_laplacian(s);
        case LaplacianKind::normalized: return normalized_laplacian(s);
        case LaplacianKind::rationormalized: return rationormalized_laplacian(s);
        case LaplacianKind::signed_: return signed_laplacian(s);
        case LaplacianKind::perturbed: return perturbed_laplacian(s, alpha);
    }
    throw Error("build_laplacian: unknown kind");
}

/// s_ik / (sqrt(d_i + x) sqrt(d_k + x)) off the diagonal, zero on it. At
/// x = 0 this is the negated off-diagonal of the normalized Laplacian.
/// Throws NegativeDegree when some d_i + x <= 0; the message names the
/// smallest x that would be accepted (exclusive bound).
inline Eigen::MatrixXd diag_shift_similarity(const SimilarityMatrix& s, double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error("diag_shift_similarity: x must be finite and >= 0");
    const DegreeVector shifted = degree(s).array() + x;
    if (auto bad = detail::non_positive(shifted); !bad.empty()) {
        const double bound = -degree(s).minCoeff();
        throw NegativeDegree("diag_shift_similarity: d_i + x <= 0 at rows " + detail::join_indices(bad) +
                                 "; x must exceed " + std::to_string(bound),
                             bad);
    }
    const Eigen::VectorXd inv_sqrt = shifted.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd out = detail::scale_both_sides(s.values(), inv_sqrt);
    out.diagonal().setZero();
    return detail::exact_symmetric(std::move(out));
}

/// Normalized similarity after lifting every document by sqrt(x) along a
/// new axis: (s_ik + x) / (sqrt(d_i + (n-1)x) sqrt(d_k + (n-1)x)).
inline Eigen::MatrixXd lifted_normalized_similarity(const SimilarityMatrix& s, double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error("lifted_normalized_similarity: x must be finite and >= 0");
    const auto n = static_cast<double>(s.size());
    const DegreeVector shifted = degree(s).array() + (n - 1.0) * x;
    if (auto bad = detail::non_positive(shifted); !bad.empty())
        throw NegativeDegree("lifted_normalized_similarity: non-positive shifted degree at rows " +
                                 detail::join_indices(bad),
                             bad);
    const Eigen::VectorXd inv_sqrt = shifted.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd num = s.values().array() + x;
    Eigen::MatrixXd out = detail::scale_both_sides(num, inv_sqrt);
    out.diagonal().setZero();
    return detail::exact_symmetric(std::move(out));
}

}  // namespace negspec
