#pragma once

// Cosine similarity matrices and the transforms that repair negative
// similarities before a Laplacian is built.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "negspec/error.hpp"
#include "negspec/vectorize.hpp"

namespace negspec {

enum class Transform { none, zero, add, add_norm, angle_max, angle_div, exp };

inline std::string_view to_string(Transform t) {
    switch (t) {
        case Transform::none: return "none";
        case Transform::zero: return "zero";
        case Transform::add: return "add";
        case Transform::add_norm: return "add_norm";
        case Transform::angle_max: return "angle_max";
        case Transform::angle_div: return "angle_div";
        case Transform::exp: return "exp";
    }
    return "?";
}

inline Transform parse_transform(std::string_view name) {
    for (auto t : {Transform::none, Transform::zero, Transform::add, Transform::add_norm, Transform::angle_max,
                   Transform::angle_div, Transform::exp})
        if (to_string(t) == name) return t;
    throw ConfigError("unknown transform '" + std::string(name) +
                      "' (expected none, zero, add, add_norm, angle_max, angle_div or exp)");
}

/// Symmetric n x n similarity matrix with zero diagonal.
///
/// Construction symmetrizes the input as (S + S^T) / 2 when the asymmetry is
/// within kSymmetryTolerance (relative to max(1, max |s|)) and rejects it
/// otherwise, so stored values are exactly symmetric.
class SimilarityMatrix {
public:
    static constexpr double kSymmetryTolerance = 1e-9;

    SimilarityMatrix() = default;

    explicit SimilarityMatrix(Eigen::MatrixXd values, std::optional<Transform> repaired_by = std::nullopt,
                              std::optional<double> c = std::nullopt)
        : values_(std::move(values)), repaired_by_(repaired_by), c_(c) {
        if (values_.rows() != values_.cols())
            throw Error("similarity matrix must be square, got " + std::to_string(values_.rows()) + "x" +
                        std::to_string(values_.cols()));
        if (!values_.allFinite()) throw Error("similarity matrix has non-finite entries");
        const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
        const double tol = kSymmetryTolerance * scale;
        const Eigen::Index n = values_.rows();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(values_(i, i)) > tol)
                throw Error("similarity matrix diagonal entry " + std::to_string(i) + " is not zero");
            values_(i, i) = 0.0;
            for (Eigen::Index k = i + 1; k < n; ++k) {
                const double a = values_(i, k), b = values_(k, i);
                if (std::abs(a - b) > tol)
                    throw Error("similarity matrix is not symmetric at (" + std::to_string(i) + ", " +
                                std::to_string(k) + ")");
                values_(i, k) = values_(k, i) = 0.5 * (a + b);
            }
        }
    }

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    Eigen::Index size() const noexcept { return values_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index k) const { return values_(i, k); }
    const std::optional<Transform>& repaired_by() const noexcept { return repaired_by_; }
    const std::optional<double>& c() const noexcept { return c_; }

private:
    Eigen::MatrixXd values_;
    std::optional<Transform> repaired_by_;
    std::optional<double> c_;
};

struct NegativityReport {
    std::size_t negative_s_entries = 0;  // off-diagonal s_ik < 0
    std::size_t negative_d_entries = 0;  // row sums d_i < 0
    double min_s = 0.0;
    double min_d = 0.0;
};

namespace detail {

inline double clamp_cos(double s) { return std::clamp(s, -1.0, 1.0); }

template <typename F>
SimilarityMatrix map_off_diagonal(const SimilarityMatrix& s, F&& f, Transform tag, std::optional<double> c) {
    Eigen::MatrixXd out = s.values();
    const Eigen::Index n = out.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = i + 1; k < n; ++k) out(i, k) = out(k, i) = f(out(i, k));
    return SimilarityMatrix(std::move(out), tag, c);
}

inline void require_non_negative(double c, std::string_view op) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw Error(std::string(op) + ": shift constant must be finite and >= 0, got " + std::to_string(c));
}

}  // namespace detail

/// s_ik = <x_i, x_k> / (|x_i| |x_k|) for i != k, clamped to [-1, 1]; zero diagonal.
inline SimilarityMatrix cosine_similarity(const EmbeddingMatrix& emb) {
    Eigen::MatrixXd unit = emb.values();
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
        const double norm = unit.row(i).norm();
        if (norm == 0.0 || !std::isfinite(norm))
            throw Error("cosine_similarity: row " + std::to_string(i) + " has zero or non-finite norm");
        unit.row(i) /= norm;
    }
    const Eigen::Index n = unit.rows();
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(i, i) = 0.0;
        for (Eigen::Index k = i + 1; k < n; ++k)
            s(i, k) = s(k, i) = detail::clamp_cos(unit.row(i).dot(unit.row(k)));
    }
    return SimilarityMatrix(std::move(s));
}

/// Negative similarities set to zero (pZ).
inline SimilarityMatrix transform_zero(const SimilarityMatrix& s) {
    return detail::map_off_diagonal(s, [](double v) { return v > 0.0 ? v : 0.0; }, Transform::zero, std::nullopt);
}

/// s + c on every off-diagonal entry (pA). Entries may exceed 1.
inline SimilarityMatrix transform_add(const SimilarityMatrix& s, double c) {
    detail::require_non_negative(c, "transform_add");
    return detail::map_off_diagonal(s, [c](double v) { return v + c; }, Transform::add, c);
}

/// (s + c) / (1 + c) on every off-diagonal entry (pN).
inline SimilarityMatrix transform_add_norm(const SimilarityMatrix& s, double c) {
    detail::require_non_negative(c, "transform_add_norm");
    return detail::map_off_diagonal(s, [c](double v) { return (v + c) / (1.0 + c); }, Transform::add_norm, c);
}

/// Rescales every angle so the widest off-diagonal angle becomes pi/2 (pQ):
/// cos((pi/2) * acos(s) / max acos(s)).
inline SimilarityMatrix transform_angle_max(const SimilarityMatrix& s) {
    const Eigen::Index n = s.size();
    if (n < 2) throw Error("transform_angle_max: need at least 2 documents");
    double max_angle = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = i + 1; k < n; ++k)
            max_angle = std::max(max_angle, std::acos(detail::clamp_cos(s(i, k))));
    if (!(max_angle > 0.0)) throw Error("transform_angle_max: degenerate angle range");
    const double scale = (std::numbers::pi / 2.0) / max_angle;
    return detail::map_off_diagonal(
        s, [scale](double v) { return std::cos(scale * std::acos(detail::clamp_cos(v))); }, Transform::angle_max,
        std::nullopt);
}

/// cos(acos(s) / (1 + c)) (pC). Non-negative for c >= 1.
inline SimilarityMatrix transform_angle_div(const SimilarityMatrix& s, double c) {
    detail::require_non_negative(c, "transform_angle_div");
    return detail::map_off_diagonal(
        s, [c](double v) { return std::cos(std::acos(detail::clamp_cos(v)) / (1.0 + c)); }, Transform::angle_div, c);
}

/// exp(-(1 - (s + c)) / 2) (pE). Strictly positive; exceeds 1 when s + c > 1.
inline SimilarityMatrix transform_exp(const SimilarityMatrix& s, double c) {
    if (!std::isfinite(c)) throw Error("transform_exp: shift constant must be finite");
    return detail::map_off_diagonal(
        s, [c](double v) { return std::exp(-(1.0 - (v + c)) / 2.0); }, Transform::exp, c);
}

/// Applies `t` with constant `c`. Transforms without a constant ignore it.
inline SimilarityMatrix apply_transform(const SimilarityMatrix& s, Transform t, double c) {
    switch (t) {
        case Transform::none: return s;
        case Transform::zero: return transform_zero(s);
        case Transform::add: return transform_add(s, c);
        case Transform::add_norm: return transform_add_norm(s, c);
        case Transform::angle_max: return transform_angle_max(s);
        case Transform::angle_div: return transform_angle_div(s, c);
        case Transform::exp: return transform_exp(s, c);
    }
    throw Error("apply_transform: unknown transform");
}

inline NegativityReport negativity_stats(const SimilarityMatrix& s) {
    NegativityReport r;
    const Eigen::Index n = s.size();
    r.min_s = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
    r.min_d = n > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double d = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            d += s(i, k);
            if (k == i) continue;
            if (s(i, k) < 0.0) ++r.negative_s_entries;
            r.min_s = std::min(r.min_s, s(i, k));
        }
        if (d < 0.0) ++r.negative_d_entries;
        r.min_d = std::min(r.min_d, d);
    }
    return r;
}

/// Appends a constant coordinate `b` to every unit row and renormalizes.
/// Pairwise cosines become (cos a + b^2) / (1 + b^2).
inline EmbeddingMatrix lift_embedding(const EmbeddingMatrix& emb, double b) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw Error("lift_embedding: b must be finite and >= 0");
    const Eigen::Index n = emb.rows(), m = emb.dims();
    Eigen::MatrixXd out(n, m + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = emb.values().row(i).norm();
        if (std::abs(norm - 1.0) > EmbeddingMatrix::kUnitTolerance)
            throw Error("lift_embedding: row " + std::to_string(i) + " is not unit length");
        out.row(i).head(m) = emb.values().row(i);
        out(i, m) = b;
        out.row(i) /= out.row(i).norm();
    }
    auto columns = emb.columns();
    columns.push_back("lift");
    return EmbeddingMatrix(std::move(out), emb.ids(), true, std::move(columns));
}

}  // namespace negspec
