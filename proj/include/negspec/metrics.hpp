#pragma once

// External clustering scores against ground-truth labels and their
// aggregation over repeated runs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "negspec/error.hpp"
#include "negspec/kmeans.hpp"

namespace negspec {

/// Maps labels to dense ids 0, 1, ... in lexicographic label order.
inline std::vector<std::size_t> encode_labels(std::span<const std::string> labels) {
    std::map<std::string, std::size_t> ids;
    for (const auto& l : labels) ids.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [label, id] : ids) id = next++;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(ids.at(l));
    return out;
}

namespace detail {

inline std::size_t class_count(std::span<const std::size_t> ids) {
    std::size_t k = 0;
    for (auto v : ids) k = std::max(k, v + 1);
    return k;
}

/// contingency(p, t) = number of items in predicted cluster p and class t.
inline Eigen::MatrixXd contingency(const Partition& pred, std::span<const std::size_t> truth) {
    if (pred.size() != truth.size())
        throw Error("metrics: prediction has " + std::to_string(pred.size()) + " items, truth has " +
                    std::to_string(truth.size()));
    Eigen::MatrixXd table =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pred.k()), static_cast<Eigen::Index>(class_count(truth)));
    for (std::size_t i = 0; i < truth.size(); ++i)
        table(static_cast<Eigen::Index>(pred[i]), static_cast<Eigen::Index>(truth[i])) += 1.0;
    return table;
}

inline double pairs(double m) { return m * (m - 1.0) / 2.0; }

}  // namespace detail

/// F1 over unordered item pairs: a pair is positive when both items share a
/// cluster. Returns 0 when no pair is positive in the prediction or truth.
inline double pairwise_f1(const Partition& pred, std::span<const std::size_t> truth) {
    const Eigen::MatrixXd table = detail::contingency(pred, truth);
    const double both = table.unaryExpr(&detail::pairs).sum();
    const double in_pred = table.rowwise().sum().unaryExpr(&detail::pairs).sum();
    const double in_truth = table.colwise().sum().unaryExpr(&detail::pairs).sum();
    if (in_pred == 0.0 || in_truth == 0.0) return 0.0;
    const double precision = both / in_pred;
    const double recall = both / in_truth;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

/// Maximum-weight perfect matching on a square score matrix (Hungarian
/// method, O(n^3)). Returns the column matched to each row.
inline std::vector<std::size_t> max_weight_matching(const Eigen::MatrixXd& score) {
    if (score.rows() != score.cols()) throw Error("max_weight_matching: score matrix must be square");
    const auto n = static_cast<std::size_t>(score.rows());
    const double inf = std::numeric_limits<double>::infinity();
    // Potentials over 1-based rows/cols; column 0 is a sentinel.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);
    auto cost = [&](std::size_t i, std::size_t j) {
        return -score(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
    };
    for (std::size_t i = 1; i <= n; ++i) {
        match_col[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match_col[j0] = match_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j)
        if (match_col[j] != 0) row_to_col[match_col[j] - 1] = j - 1;
    return row_to_col;
}

/// Per-class F1 under the one-to-one cluster/class matching that maximizes
/// the summed F1, averaged over the truth classes. Unmatched classes score 0.
inline double matched_f1(const Partition& pred, std::span<const std::size_t> truth) {
    const Eigen::MatrixXd table = detail::contingency(pred, truth);
    const Eigen::VectorXd cluster_sizes = table.rowwise().sum();
    const Eigen::VectorXd class_sizes = table.colwise().sum().transpose();
    const Eigen::Index side = std::max(table.rows(), table.cols());
    Eigen::MatrixXd f1 = Eigen::MatrixXd::Zero(side, side);
    for (Eigen::Index p = 0; p < table.rows(); ++p)
        for (Eigen::Index t = 0; t < table.cols(); ++t) {
            const double denom = cluster_sizes(p) + class_sizes(t);
            if (denom > 0.0) f1(p, t) = 2.0 * table(p, t) / denom;
        }
    const auto match = max_weight_matching(f1);
    double total = 0.0;
    std::size_t classes = 0;
    for (Eigen::Index t = 0; t < table.cols(); ++t)
        if (class_sizes(t) > 0.0) ++classes;
    for (Eigen::Index p = 0; p < side; ++p) total += f1(p, static_cast<Eigen::Index>(match[static_cast<std::size_t>(p)]));
    return classes == 0 ? 0.0 : total / static_cast<double>(classes);
}

inline double pairwise_f1(const Partition& pred, std::span<const std::string> truth) {
    const auto ids = encode_labels(truth);
    return pairwise_f1(pred, ids);
}

inline double matched_f1(const Partition& pred, std::span<const std::string> truth) {
    const auto ids = encode_labels(truth);
    return matched_f1(pred, ids);
}

struct RunScores {
    std::vector<double> scores;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation; 0 for a single run
};

inline RunScores aggregate(std::vector<double> scores) {
    if (scores.empty()) throw Error("aggregate: no scores");
    RunScores r;
    const auto n = static_cast<double>(scores.size());
    r.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
    if (scores.size() > 1) {
        double ss = 0.0;
        for (double s : scores) ss += (s - r.mean) * (s - r.mean);
        r.sd = std::sqrt(ss / (n - 1.0));
    }
    r.scores = std::move(scores);
    return r;
}

}  // namespace negspec
