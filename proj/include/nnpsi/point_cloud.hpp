#pragma once

#include <cstddef>
#include <vector>

namespace nnpsi {

/// Covariate sample in a metric space. Immutable after construction; all
/// accessors are safe for concurrent reads.
///
/// Backends:
///  - euclidean:     n points in R^d, row-major coordinates
///  - function_grid: n curves sampled on a uniform m-point grid over [0,1],
///                   distance sqrt(dt * sum (x_i - x_j)^2) with dt = 1/(m-1)
///  - precomputed:   an n x n symmetric distance matrix
class PointCloud {
public:
    enum class Backend { Euclidean, FunctionGrid, Precomputed };

    static PointCloud euclidean(int n, int dim, std::vector<double> coords);
    static PointCloud function_grid(int n, int grid_points, std::vector<double> values);
    static PointCloud precomputed(int n, std::vector<double> dist_matrix);

    int size() const { return n_; }
    Backend backend() const { return backend_; }
    int dim() const { return dim_; }

    double distance(int i, int j) const;

    // Square of distance(i, j). Cheaper than distance for euclidean and
    // function_grid backends and the quantity neighbor search compares;
    // squaring preserves order and exact ties.
    double sq_distance(int i, int j) const;

    const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * dim_; }
    bool kd_eligible() const { return backend_ == Backend::Euclidean; }

private:
    PointCloud(Backend b, int n, int dim, std::vector<double> data);
    void check_index(int i) const;

    Backend backend_;
    int n_;
    int dim_;              // coordinates per point (grid points for FunctionGrid, n for Precomputed)
    double weight_ = 1.0;  // dt for FunctionGrid, 1 otherwise
    std::vector<double> data_;
};

/// Standardize each coordinate of a euclidean cloud to zero mean and unit
/// variance; coordinates with zero variance are left untouched.
PointCloud standardize(const PointCloud& cloud);

/// Product space over clouds of equal size; the metric is the root sum of
/// squares of the component distances. Holds non-owning pointers, so the
/// component clouds must outlive the product.
class ProductCloud {
public:
    explicit ProductCloud(std::vector<const PointCloud*> components);

    int size() const { return n_; }
    int components() const { return static_cast<int>(parts_.size()); }

    double distance(int i, int j) const;
    double sq_distance(int i, int j) const;

private:
    std::vector<const PointCloud*> parts_;
    int n_;
};

} // namespace nnpsi
