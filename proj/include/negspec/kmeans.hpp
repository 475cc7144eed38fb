#pragma once

// Seeded k-means (k-means++ initialization, Lloyd iterations, best of
// several restarts) for spectral embeddings.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "negspec/error.hpp"

namespace negspec {

/// Assignment of n items to k clusters with ids in [0, k).
class Partition {
public:
    Partition() = default;

    Partition(std::vector<std::size_t> assignment, std::size_t k) : assignment_(std::move(assignment)), k_(k) {
        if (k_ == 0) throw Error("partition: k must be >= 1");
        for (std::size_t i = 0; i < assignment_.size(); ++i)
            if (assignment_[i] >= k_)
                throw Error("partition: item " + std::to_string(i) + " has cluster id " +
                            std::to_string(assignment_[i]) + " >= k = " + std::to_string(k_));
    }

    const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
    std::size_t operator[](std::size_t i) const { return assignment_[i]; }
    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return assignment_.size(); }

    std::vector<std::size_t> cardinalities() const {
        std::vector<std::size_t> out(k_, 0);
        for (auto c : assignment_) ++out[c];
        return out;
    }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<std::size_t> assignment_;
    std::size_t k_ = 1;
};

/// Deterministic random source. Only the raw mt19937_64 output is used
/// (std distributions differ between standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., n-1}; n must be positive.
    std::size_t index(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 engine_;
};

struct KMeansResult {
    Partition partition;
    Eigen::MatrixXd centroids;          // k x dims
    double inertia = 0.0;               // sum of squared distances to centroids
    std::vector<double> inertia_trace;  // inertia after each Lloyd iteration
    std::size_t iterations = 0;
};

struct KMeansOptions {
    std::size_t max_iterations = 300;
};

/// k-means++ seeding: first index uniform, each next one drawn with
/// probability proportional to the squared distance to the nearest chosen
/// centroid. When every remaining distance is zero the draw is uniform over
/// the indices not yet chosen.
inline std::vector<std::size_t> kmeans_pp_init(const Eigen::MatrixXd& points, std::size_t k, Rng& rng) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k < 1 || k > n) throw Error("kmeans_pp_init: need 1 <= k <= n");

    std::vector<std::size_t> chosen{rng.index(n)};
    std::vector<bool> taken(n, false);
    taken[chosen[0]] = true;
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i)
        nearest[i] = (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(chosen[0])))
                         .squaredNorm();

    while (chosen.size() < k) {
        double total = 0.0;
        for (double d : nearest) total += d;
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (nearest[i] <= 0.0) continue;
                acc += nearest[i];
                pick = i;
                if (acc > target) break;
            }
        } else {
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i)
                if (!taken[i]) free.push_back(i);
            pick = free[rng.index(free.size())];
        }
        chosen.push_back(pick);
        taken[pick] = true;
        const auto c = points.row(static_cast<Eigen::Index>(pick));
        for (std::size_t i = 0; i < n; ++i)
            nearest[i] = std::min(nearest[i], (points.row(static_cast<Eigen::Index>(i)) - c).squaredNorm());
    }
    return chosen;
}

namespace detail {

inline double assign_nearest(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                             std::vector<std::size_t>& assignment, std::vector<double>& dist) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
            const double d = (points.row(i) - centroids.row(j)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<std::size_t>(j);
            }
        }
        assignment[static_cast<std::size_t>(i)] = arg;
        dist[static_cast<std::size_t>(i)] = best;
        inertia += best;
    }
    return inertia;
}

/// Moves the point farthest from its centroid (taken from a cluster with at
/// least two members) into each empty cluster.
inline void repair_empty_clusters(std::size_t k, std::vector<std::size_t>& assignment,
                                  std::vector<double>& dist) {
    std::vector<std::size_t> sizes(k, 0);
    for (auto a : assignment) ++sizes[a];
    for (std::size_t j = 0; j < k; ++j) {
        if (sizes[j] > 0) continue;
        std::size_t far = assignment.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (sizes[assignment[i]] > 1 && dist[i] > far_d) {
                far_d = dist[i];
                far = i;
            }
        if (far == assignment.size()) break;  // unreachable while n >= k
        --sizes[assignment[far]];
        assignment[far] = j;
        sizes[j] = 1;
        dist[far] = 0.0;
    }
}

inline Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points, std::size_t k,
                                     const std::vector<std::size_t>& assignment) {
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
    std::vector<double> counts(k, 0.0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        means.row(static_cast<Eigen::Index>(assignment[i])) += points.row(static_cast<Eigen::Index>(i));
        counts[assignment[i]] += 1.0;
    }
    for (std::size_t j = 0; j < k; ++j)
        if (counts[j] > 0.0) means.row(static_cast<Eigen::Index>(j)) /= counts[j];
    return means;
}

inline double inertia_of(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                         const std::vector<std::size_t>& assignment) {
    double total = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        total += (points.row(static_cast<Eigen::Index>(i)) - centroids.row(static_cast<Eigen::Index>(assignment[i])))
                     .squaredNorm();
    return total;
}

}  // namespace detail

/// Lloyd iterations from the given initial centroids until the assignment
/// stops changing or `max_iterations` is reached.
inline KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids,
                          const KMeansOptions& options = {}) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto k = static_cast<std::size_t>(centroids.rows());
    if (k < 1 || k > n) throw Error("lloyd: need 1 <= k <= n");
    if (centroids.cols() != points.cols()) throw Error("lloyd: centroid dimension mismatch");

    KMeansResult out;
    std::vector<std::size_t> assignment(n, 0), previous;
    std::vector<double> dist(n, 0.0);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        detail::assign_nearest(points, centroids, assignment, dist);
        detail::repair_empty_clusters(k, assignment, dist);
        if (it > 0 && assignment == previous) break;
        centroids = detail::cluster_means(points, k, assignment);
        out.inertia_trace.push_back(detail::inertia_of(points, centroids, assignment));
        previous = assignment;
        out.iterations = it + 1;
    }
    out.inertia = detail::inertia_of(points, centroids, assignment);
    out.centroids = std::move(centroids);
    out.partition = Partition(std::move(assignment), k);
    return out;
}

/// Best-inertia result over `restarts` k-means++ initializations drawn from
/// one Rng seeded with `seed`. Earlier restarts win ties.
inline KMeansResult kmeans_detailed(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                                    std::size_t restarts = 10, const KMeansOptions& options = {}) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k < 1) throw Error("kmeans: k must be >= 1");
    if (n < k) throw Error("kmeans: " + std::to_string(n) + " points cannot form " + std::to_string(k) + " clusters");
    if (restarts < 1) throw Error("kmeans: restarts must be >= 1");
    if (!points.allFinite()) throw Error("kmeans: points contain non-finite values");

    Rng rng(seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        const auto init = kmeans_pp_init(points, k, rng);
        Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), points.cols());
        for (std::size_t j = 0; j < k; ++j)
            centroids.row(static_cast<Eigen::Index>(j)) = points.row(static_cast<Eigen::Index>(init[j]));
        auto result = lloyd(points, std::move(centroids), options);
        if (result.inertia < best.inertia) best = std::move(result);
    }
    return best;
}

inline Partition kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed, std::size_t restarts = 10) {
    return kmeans_detailed(points, k, seed, restarts).partition;
}

}  // namespace negspec
