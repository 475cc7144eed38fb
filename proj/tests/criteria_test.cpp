#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace negspec;
using negspec::testing::oracle_cut;
using negspec::testing::oracle_ncut;
using negspec::testing::oracle_rcut;
using negspec::testing::random_partition;
using negspec::testing::random_symmetric_zero_diag;
using negspec::testing::shift_off_diagonal;

namespace {

SimilarityMatrix four_nodes() {
    Eigen::MatrixXd m(4, 4);
    m << 0, 1, 0.1, 0.1,
         1, 0, 0.1, 0.1,
         0.1, 0.1, 0, 1,
         0.1, 0.1, 1, 0;
    return SimilarityMatrix(m);
}

const Partition kPairs({0, 0, 1, 1}, 2);

}  // namespace

TEST(Cut, FourNodeExample) {
    EXPECT_NEAR(cut(four_nodes(), kPairs, 0), 0.4, 1e-15);
    EXPECT_NEAR(cut(four_nodes(), kPairs, 1), 0.4, 1e-15);
    EXPECT_EQ(cut(four_nodes(), Partition({0, 0, 0, 0}, 1), 0), 0.0);
    EXPECT_THROW(cut(four_nodes(), kPairs, 2), Error);
    EXPECT_THROW(cut(four_nodes(), Partition({0, 1}, 2), 0), Error);
}

TEST(Criteria, FourNodeExample) {
    EXPECT_NEAR(rcut(four_nodes(), kPairs), 0.4, 1e-15);
    EXPECT_NEAR(ncut(four_nodes(), kPairs), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(nrcut(four_nodes(), kPairs), 0.18181818181818182, 1e-15);
    const auto r = cut_report(four_nodes(), kPairs);
    EXPECT_NEAR(r.volumes[0], 2.4, 1e-15);
    EXPECT_NEAR(r.nr_volumes[1], 4.4, 1e-15);
    EXPECT_EQ(r.cardinalities, (std::vector<std::size_t>{2, 2}));
    EXPECT_NEAR(r.rcut, r.per_cluster_cut[0] / 2 + r.per_cluster_cut[1] / 2, 1e-10);
}

TEST(Criteria, SingleClusterIsZero) {
    const Partition one({0, 0, 0, 0}, 1);
    EXPECT_EQ(rcut(four_nodes(), one), 0.0);
    EXPECT_EQ(ncut(four_nodes(), one), 0.0);
    EXPECT_EQ(nrcut(four_nodes(), one), 0.0);
}

TEST(Criteria, DisconnectedBlocksAlignedPartition) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = 0.7;
    const SimilarityMatrix s(m);
    EXPECT_EQ(rcut(s, kPairs), 0.0);
    EXPECT_EQ(ncut(s, kPairs), 0.0);
}

TEST(Criteria, AllZeroSimilarity) {
    const SimilarityMatrix s(Eigen::MatrixXd::Zero(4, 4));
    EXPECT_EQ(nrcut(s, kPairs), 0.0);
    EXPECT_EQ(nrcut(s, Partition({0, 0, 0, 1}, 2)), 0.0);
    EXPECT_THROW(ncut(s, kPairs), NegativeVolume);  // zero volume
    EXPECT_THROW(cut_report(s, kPairs), NegativeVolume);
}

TEST(Criteria, EmptyClusterAndNegativeVolume) {
    EXPECT_THROW(rcut(four_nodes(), Partition({0, 0, 0, 0}, 2)), Error);

    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(4, 4, -0.9);
    m.diagonal().setZero();
    const SimilarityMatrix s(m);
    try {
        ncut(s, kPairs);
        FAIL();
    } catch (const NegativeVolume& e) {
        EXPECT_EQ(e.clusters(), (std::vector<std::size_t>{0, 1}));
    }
    EXPECT_THROW(nrcut(s, kPairs), NegativeVolume);  // V' = -5.4 + 2
    EXPECT_THROW(cut_report(s, kPairs), NegativeVolume);
}

TEST(Criteria, SymmetricTwoWayCut) {
    std::mt19937_64 rng(1);
    const SimilarityMatrix s(random_symmetric_zero_diag(rng, 9));
    const Partition p(random_partition(rng, 9, 2), 2);
    EXPECT_NEAR(cut(s, p, 0), cut(s, p, 1), 1e-12);
}

TEST(Criteria, AgreeWithDoubleLoopOracle) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 9;
        const std::size_t k = 1 + static_cast<std::size_t>(trial) % std::min<std::size_t>(n, 4);
        const Eigen::MatrixXd m = random_symmetric_zero_diag(rng, static_cast<Eigen::Index>(n), 0.0, 1.0);
        const SimilarityMatrix s(m);
        const auto a = random_partition(rng, n, k);
        const Partition p(a, k);
        for (std::size_t j = 0; j < k; ++j) EXPECT_NEAR(cut(s, p, j), oracle_cut(m, a, j), 1e-10);
        EXPECT_NEAR(rcut(s, p), oracle_rcut(m, a, k), 1e-10);
        if ((m.rowwise().sum().array() > 0.0).all()) {
            EXPECT_NEAR(ncut(s, p), oracle_ncut(m, a, k), 1e-10);
        }
    }
}

TEST(Criteria, NonNegativeBounds) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const SimilarityMatrix s(random_symmetric_zero_diag(rng, 10, 0.01, 1.0));
        const std::size_t k = 2 + static_cast<std::size_t>(trial) % 4;
        const Partition p(random_partition(rng, 10, k), k);
        const auto r = cut_report(s, p);
        EXPECT_GE(r.rcut, 0.0);
        EXPECT_GE(r.nrcut, 0.0);
        EXPECT_GE(r.ncut, 0.0);
        EXPECT_LE(r.ncut, static_cast<double>(k));
    }
}

// S + c(J - I) raises cut_j by c |C_j| (n - |C_j|), so RCut grows by
// c (k - 1) n for every partition and its minimizers do not move.
TEST(Criteria, RCutMinimizerSurvivesConstantShift) {
    std::mt19937_64 rng(4);
    for (std::size_t n = 4; n <= 8; ++n)
        for (int trial = 0; trial < 5; ++trial) {
            const Eigen::MatrixXd m = random_symmetric_zero_diag(rng, static_cast<Eigen::Index>(n));
            for (double c : {0.5, 1.0, 2.0}) {
                const SimilarityMatrix s(m), st(shift_off_diagonal(m, c));
                double best = 1e300, best_t = 1e300;
                std::size_t arg = 0, arg_t = 0;
                for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
                    if (mask & 1) continue;  // fix item 0 in cluster 0
                    std::vector<std::size_t> a(n);
                    for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1;
                    const Partition p(a, 2);
                    const double r = rcut(s, p), rt = rcut(st, p);
                    EXPECT_NEAR(rt - r, c * static_cast<double>(n), 1e-10);
                    if (r < best) best = r, arg = mask;
                    if (rt < best_t) best_t = rt, arg_t = mask;
                }
                EXPECT_EQ(arg, arg_t);
            }
        }
}
