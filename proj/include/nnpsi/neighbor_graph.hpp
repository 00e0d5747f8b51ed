#pragma once

#include <vector>

#include "nnpsi/point_cloud.hpp"

namespace nnpsi {

/// 1-nearest-neighbor graph of a covariate sample. nbr[i] is the index of
/// the closest point to i with itself excluded; exact ties are broken by the
/// smallest index and surfaced through had_ties. Immutable once built.
struct NeighborGraph {
    int n = 0;
    std::vector<int> nbr;
    std::vector<int> in_degree;
    bool had_ties = false;

    /// Wrap an explicit neighbor assignment (used by tests and oracles).
    static NeighborGraph from_neighbors(std::vector<int> nbr, bool had_ties = false);

    /// W_n: fraction of points belonging to a mutual nearest-neighbor pair.
    double mutual_fraction() const;

    /// W_n': (1/n) * number of ordered pairs i != j with N(i) = N(j),
    /// computed from in-degrees as (1/n) sum_k deg_k (deg_k - 1).
    double shared_neighbor_count() const;

    /// L_n: maximal in-degree.
    int max_in_degree() const;
};

enum class NeighborStrategy {
    Auto,           // kd-tree for low-dimensional euclidean data, else parallel brute force
    BruteSerial,    // serial O(n^2) reference
    BruteParallel,  // OpenMP over query points, bit-identical to BruteSerial
    KdTree,         // exact space-partitioning search, bit-identical to BruteSerial
};

NeighborGraph build_neighbor_graph(const PointCloud& cloud,
                                   NeighborStrategy strategy = NeighborStrategy::Auto);
NeighborGraph build_neighbor_graph(const ProductCloud& cloud,
                                   NeighborStrategy strategy = NeighborStrategy::Auto);

/// gamma_d: limit of W_n for samples with a density in R^d. Equals
/// V_d / (2 V_d - lens_d) where lens_d is the intersection volume of two
/// unit balls at center distance 1; evaluated through the regularized
/// incomplete beta function. Decreases from 2/3 at d = 1 toward 1/2.
double gamma_d(int d);

} // namespace nnpsi
