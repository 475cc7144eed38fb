#pragma once

// Graph-cut objectives of a partition: Cut, RCut, NCut and NRCut.
//
// Cluster volume V_j is the sum of the degrees of C_j's members. NRCut
// divides by V'_j = V_j + |C_j|, the volume under S' = S + I.

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "negspec/error.hpp"
#include "negspec/kmeans.hpp"
#include "negspec/laplacian.hpp"
#include "negspec/similarity.hpp"

namespace negspec {

struct CutReport {
    std::vector<double> per_cluster_cut;
    std::vector<double> volumes;
    std::vector<double> nr_volumes;
    std::vector<std::size_t> cardinalities;
    double rcut = 0.0;
    double ncut = 0.0;
    double nrcut = 0.0;
};

namespace detail {

inline void check_partition(const SimilarityMatrix& s, const Partition& p) {
    if (static_cast<Eigen::Index>(p.size()) != s.size())
        throw Error("criteria: partition covers " + std::to_string(p.size()) + " items but S is " +
                    std::to_string(s.size()) + "x" + std::to_string(s.size()));
}

/// within(i, j) = sum of s_il over members l of cluster j.
inline Eigen::MatrixXd cluster_row_sums(const SimilarityMatrix& s, const Partition& p) {
    const Eigen::Index n = s.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(p.k()));
    for (Eigen::Index l = 0; l < n; ++l) out.col(static_cast<Eigen::Index>(p[static_cast<std::size_t>(l)])) += s.values().col(l);
    return out;
}

inline std::vector<double> all_cuts(const SimilarityMatrix& s, const Partition& p) {
    const Eigen::MatrixXd sums = cluster_row_sums(s, p);
    std::vector<double> cuts(p.k(), 0.0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(p[static_cast<std::size_t>(i)]);
        cuts[static_cast<std::size_t>(j)] += sums.row(i).sum() - sums(i, j);
    }
    return cuts;
}

inline std::vector<double> all_volumes(const SimilarityMatrix& s, const Partition& p) {
    const DegreeVector d = degree(s);
    std::vector<double> vol(p.k(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) vol[p[i]] += d(static_cast<Eigen::Index>(i));
    return vol;
}

inline std::vector<std::size_t> non_positive(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (!(v[j] > 0.0)) out.push_back(j);
    return out;
}

}  // namespace detail

/// Total similarity between members of cluster j and everything outside it.
inline double cut(const SimilarityMatrix& s, const Partition& p, std::size_t j) {
    detail::check_partition(s, p);
    if (j >= p.k()) throw Error("cut: cluster " + std::to_string(j) + " out of range");
    return detail::all_cuts(s, p)[j];
}

inline double rcut(const SimilarityMatrix& s, const Partition& p) {
    detail::check_partition(s, p);
    const auto sizes = p.cardinalities();
    const auto cuts = detail::all_cuts(s, p);
    double total = 0.0;
    for (std::size_t j = 0; j < p.k(); ++j) {
        if (sizes[j] == 0) throw Error("rcut: cluster " + std::to_string(j) + " is empty");
        total += cuts[j] / static_cast<double>(sizes[j]);
    }
    return total;
}

/// Throws NegativeVolume when some cluster volume is <= 0.
inline double ncut(const SimilarityMatrix& s, const Partition& p) {
    detail::check_partition(s, p);
    const auto vol = detail::all_volumes(s, p);
    if (auto bad = detail::non_positive(vol); !bad.empty())
        throw NegativeVolume("ncut: non-positive volume in clusters " + detail::join_indices(bad), bad);
    const auto cuts = detail::all_cuts(s, p);
    double total = 0.0;
    for (std::size_t j = 0; j < p.k(); ++j) total += cuts[j] / vol[j];
    return total;
}

/// Throws NegativeVolume when some V_j + |C_j| is <= 0.
inline double nrcut(const SimilarityMatrix& s, const Partition& p) {
    detail::check_partition(s, p);
    auto vol = detail::all_volumes(s, p);
    const auto sizes = p.cardinalities();
    for (std::size_t j = 0; j < vol.size(); ++j) vol[j] += static_cast<double>(sizes[j]);
    if (auto bad = detail::non_positive(vol); !bad.empty())
        throw NegativeVolume("nrcut: non-positive shifted volume in clusters " + detail::join_indices(bad),
                             bad);
    const auto cuts = detail::all_cuts(s, p);
    double total = 0.0;
    for (std::size_t j = 0; j < p.k(); ++j) total += cuts[j] / vol[j];
    return total;
}

/// All criteria at once. Errors as in rcut / ncut / nrcut.
inline CutReport cut_report(const SimilarityMatrix& s, const Partition& p) {
    CutReport r;
    detail::check_partition(s, p);
    r.per_cluster_cut = detail::all_cuts(s, p);
    r.volumes = detail::all_volumes(s, p);
    r.cardinalities = p.cardinalities();
    r.nr_volumes = r.volumes;
    for (std::size_t j = 0; j < r.nr_volumes.size(); ++j) r.nr_volumes[j] += static_cast<double>(r.cardinalities[j]);
    r.rcut = rcut(s, p);
    r.ncut = ncut(s, p);
    r.nrcut = nrcut(s, p);
    return r;
}

}  // namespace negspec
