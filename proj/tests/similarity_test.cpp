#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_support.hpp"

using namespace negspec;
using negspec::testing::random_symmetric_zero_diag;
using negspec::testing::random_unit_rows;

namespace {

SimilarityMatrix pair_matrix(double s) {
    Eigen::MatrixXd m(2, 2);
    m << 0, s, s, 0;
    return SimilarityMatrix(m);
}

double off(const SimilarityMatrix& s) { return s(0, 1); }

}  // namespace

TEST(SimilarityMatrix, SymmetrizesWithinTolerance) {
    Eigen::MatrixXd m(2, 2);
    m << 0, 0.5, 0.5 + 1e-12, 0;
    SimilarityMatrix s(m);
    EXPECT_EQ(s(0, 1), s(1, 0));
    m(1, 0) = 0.6;
    EXPECT_THROW(SimilarityMatrix{m}, Error);
}

TEST(SimilarityMatrix, RejectsNonZeroDiagonalAndNonSquare) {
    EXPECT_THROW(SimilarityMatrix(Eigen::MatrixXd::Identity(2, 2)), Error);
    EXPECT_THROW(SimilarityMatrix(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST(CosineSimilarity, KnownAngles) {
    Eigen::MatrixXd v(4, 2);
    v << 1, 0, 2, 0, 0, 3, -1, 0;
    const auto s = cosine_similarity(EmbeddingMatrix(v));
    EXPECT_DOUBLE_EQ(s(0, 1), 1.0);   // identical direction
    EXPECT_DOUBLE_EQ(s(0, 2), 0.0);   // orthogonal
    EXPECT_DOUBLE_EQ(s(0, 3), -1.0);  // antipodal
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(s(i, i), 0.0);
}

TEST(CosineSimilarity, ZeroRowIsAnError) {
    Eigen::MatrixXd v(2, 2);
    v << 1, 0, 0, 0;
    try {
        cosine_similarity(EmbeddingMatrix(v));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
    }
}

TEST(CosineSimilarity, EntriesStayInRange) {
    std::mt19937_64 rng(11);
    const auto s = cosine_similarity(EmbeddingMatrix(random_unit_rows(rng, 40, 3)));
    EXPECT_LE(s.values().maxCoeff(), 1.0 + 1e-9);
    EXPECT_GE(s.values().minCoeff(), -1.0 - 1e-9);
}

TEST(TransformZero, ClipsNegatives) {
    EXPECT_EQ(off(transform_zero(pair_matrix(-0.5))), 0.0);
    EXPECT_EQ(off(transform_zero(pair_matrix(0.7))), 0.7);
    EXPECT_EQ(off(transform_zero(pair_matrix(0.0))), 0.0);
    EXPECT_EQ(transform_zero(pair_matrix(0.1)).repaired_by(), Transform::zero);
}

TEST(TransformAdd, ShiftsOffDiagonal) {
    EXPECT_DOUBLE_EQ(off(transform_add(pair_matrix(-0.3), 1.0)), 0.7);
    EXPECT_DOUBLE_EQ(off(transform_add(pair_matrix(0.5), 0.0)), 0.5);
    EXPECT_DOUBLE_EQ(off(transform_add(pair_matrix(1.0), 3.0)), 4.0);
    EXPECT_EQ(transform_add(pair_matrix(1.0), 3.0)(0, 0), 0.0);
    EXPECT_THROW(transform_add(pair_matrix(0.0), -0.1), Error);
}

TEST(TransformAddNorm, ShiftsAndRescales) {
    EXPECT_DOUBLE_EQ(off(transform_add_norm(pair_matrix(-1.0), 1.0)), 0.0);
    for (double c : {0.0, 0.5, 7.0}) EXPECT_DOUBLE_EQ(off(transform_add_norm(pair_matrix(1.0), c)), 1.0);
    EXPECT_DOUBLE_EQ(off(transform_add_norm(pair_matrix(0.0), 3.0)), 0.75);
    EXPECT_THROW(transform_add_norm(pair_matrix(0.0), -1.0), Error);
}

TEST(TransformAngleMax, WidestAngleMapsToZero) {
    Eigen::MatrixXd m(3, 3);
    m << 0, -1, 0, -1, 0, 1, 0, 1, 0;
    const auto q = transform_angle_max(SimilarityMatrix(m));
    EXPECT_NEAR(q(0, 1), 0.0, 1e-15);                 // widest angle
    EXPECT_NEAR(q(1, 2), 1.0, 1e-15);                 // zero angle
    EXPECT_NEAR(q(0, 2), 0.7071067811865476, 1e-15);  // pi/2 of max pi -> pi/4
}

TEST(TransformAngleMax, DegenerateRangeAndTooSmall) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
    EXPECT_THROW(transform_angle_max(SimilarityMatrix(m)), Error);
    EXPECT_THROW(transform_angle_max(SimilarityMatrix(Eigen::MatrixXd::Zero(1, 1))), Error);
}

TEST(TransformAngleDiv, DividesAngles) {
    EXPECT_NEAR(off(transform_angle_div(pair_matrix(-1.0), 1.0)), 0.0, 1e-15);
    for (double c : {0.0, 1.0, 4.0}) EXPECT_DOUBLE_EQ(off(transform_angle_div(pair_matrix(1.0), c)), 1.0);
    EXPECT_NEAR(off(transform_angle_div(pair_matrix(0.0), 1.0)), 0.7071067811865476, 1e-15);
    EXPECT_THROW(transform_angle_div(pair_matrix(0.0), -2.0), Error);
}

TEST(TransformExp, ExponentialOfShiftedDistance) {
    EXPECT_DOUBLE_EQ(off(transform_exp(pair_matrix(1.0), 0.0)), 1.0);
    EXPECT_NEAR(off(transform_exp(pair_matrix(-1.0), 0.0)), 0.36787944117144233, 1e-15);
    EXPECT_NEAR(off(transform_exp(pair_matrix(0.0), 2.0)), 1.6487212707001282, 1e-15);
}

TEST(Transforms, PreserveSymmetryDiagonalAndInput) {
    std::mt19937_64 rng(5);
    const SimilarityMatrix s(random_symmetric_zero_diag(rng, 12));
    const Eigen::MatrixXd before = s.values();
    for (auto t : {Transform::zero, Transform::add, Transform::add_norm, Transform::angle_max, Transform::angle_div,
                   Transform::exp}) {
        const auto r = apply_transform(s, t, 1.5);
        EXPECT_EQ(r.values(), r.values().transpose()) << to_string(t);
        EXPECT_TRUE(r.values().diagonal().isZero(0.0)) << to_string(t);
        EXPECT_EQ(r.repaired_by(), t);
    }
    EXPECT_EQ(s.values(), before);
}

TEST(Transforms, RangeGuarantees) {
    std::mt19937_64 rng(6);
    const SimilarityMatrix s(random_symmetric_zero_diag(rng, 15));
    auto in_unit = [](const SimilarityMatrix& m) {
        return m.values().minCoeff() >= 0.0 && m.values().maxCoeff() <= 1.0;
    };
    EXPECT_TRUE(in_unit(transform_zero(s)));
    EXPECT_TRUE(in_unit(transform_add_norm(s, 1.0)));
    EXPECT_TRUE(in_unit(transform_angle_max(s)));
    EXPECT_TRUE(in_unit(transform_angle_div(s, 1.0)));
    const auto e = transform_exp(s, 0.0).values();
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index k = 0; k < e.cols(); ++k)
            if (i != k) {
                EXPECT_GT(e(i, k), 0.0);
            }
}

// Every transform is increasing in s (strictly, except zeroing).
TEST(Transforms, MonotoneInSimilarity) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        double a = u(rng), b = u(rng);
        if (a == b) continue;
        if (a < b) std::swap(a, b);
        Eigen::MatrixXd m(3, 3);
        m << 0, a, b, a, 0, -1, b, -1, 0;  // the -1 pins the max angle for angle_max
        const SimilarityMatrix s(m);
        for (auto t : {Transform::add, Transform::add_norm, Transform::angle_max, Transform::angle_div,
                       Transform::exp}) {
            const auto r = apply_transform(s, t, 1.0);
            EXPECT_GT(r(0, 1), r(0, 2)) << to_string(t) << " a=" << a << " b=" << b;
        }
        const auto z = transform_zero(s);
        EXPECT_GE(z(0, 1), z(0, 2));
        if (a > 0.0) {
            EXPECT_GT(z(0, 1), z(0, 2));
        }
    }
}

TEST(TransformExp, ShiftIsAScaleFactor) {
    std::mt19937_64 rng(8);
    const SimilarityMatrix s(random_symmetric_zero_diag(rng, 10));
    const auto base = transform_exp(s, 0.0).values();
    for (double c : {0.5, 1.0, 2.0, 3.0}) {
        const auto shifted = transform_exp(s, c).values();
        EXPECT_LE((shifted - std::exp(c / 2.0) * base).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(NegativityStats, Counts) {
    auto r = negativity_stats(pair_matrix(-1.0));
    EXPECT_EQ(r.negative_s_entries, 2u);
    EXPECT_EQ(r.negative_d_entries, 2u);
    EXPECT_EQ(r.min_s, -1.0);
    EXPECT_EQ(r.min_d, -1.0);

    r = negativity_stats(pair_matrix(0.4));
    EXPECT_EQ(r.negative_s_entries, 0u);
    EXPECT_EQ(r.negative_d_entries, 0u);

    // One negative pair outweighed by positives: row sums 0.3, 0.4, 1.1.
    Eigen::MatrixXd m(3, 3);
    m << 0, -0.2, 0.5, -0.2, 0, 0.6, 0.5, 0.6, 0;
    r = negativity_stats(SimilarityMatrix(m));
    EXPECT_EQ(r.negative_s_entries, 2u);
    EXPECT_EQ(r.negative_d_entries, 0u);
    EXPECT_DOUBLE_EQ(r.min_s, -0.2);
    EXPECT_NEAR(r.min_d, 0.3, 1e-15);
}

TEST(NegativityStats, BoundsHold) {
    std::mt19937_64 rng(9);
    for (Eigen::Index n : {1, 2, 7, 20}) {
        const auto r = negativity_stats(SimilarityMatrix(random_symmetric_zero_diag(rng, n)));
        EXPECT_LE(r.negative_d_entries, static_cast<std::size_t>(n));
        EXPECT_LE(r.negative_s_entries, static_cast<std::size_t>(n * (n - 1)));
    }
}

TEST(LiftEmbedding, KnownCases) {
    Eigen::MatrixXd v(3, 2);
    v << 1, 0, 0, 1, -1, 0;
    const EmbeddingMatrix e(v, {}, true);
    const auto plain = cosine_similarity(e);
    EXPECT_EQ(cosine_similarity(lift_embedding(e, 0.0)).values(), plain.values());
    const auto lifted = cosine_similarity(lift_embedding(e, 1.0));
    EXPECT_NEAR(lifted(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(lifted(0, 2), 0.0, 1e-15);
    EXPECT_THROW(lift_embedding(e, -1.0), Error);
    EXPECT_THROW(lift_embedding(EmbeddingMatrix(2.0 * v), 1.0), Error);
}

TEST(LiftEmbedding, MatchesAddNormWithSquaredShift) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        const EmbeddingMatrix e(random_unit_rows(rng, 15, 4), {}, true);
        for (double b : {0.3, 1.0, 2.5}) {
            const auto lhs = cosine_similarity(lift_embedding(e, b)).values();
            const auto rhs = transform_add_norm(cosine_similarity(e), b * b).values();
            EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(ParseTransform, NamesRoundTrip) {
    for (auto t : {Transform::none, Transform::zero, Transform::add, Transform::add_norm, Transform::angle_max,
                   Transform::angle_div, Transform::exp})
        EXPECT_EQ(parse_transform(to_string(t)), t);
    EXPECT_THROW(parse_transform("abs"), ConfigError);
}
