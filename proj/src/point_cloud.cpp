#include "nnpsi/point_cloud.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace nnpsi {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
    }
}

} // namespace

PointCloud::PointCloud(Backend b, int n, int dim, std::vector<double> data)
    : backend_(b), n_(n), dim_(dim), data_(std::move(data)) {}

PointCloud PointCloud::euclidean(int n, int dim, std::vector<double> coords) {
    if (n < 1 || dim < 1) throw std::invalid_argument("euclidean cloud: n and dim must be positive");
    if (coords.size() != static_cast<std::size_t>(n) * dim) {
        throw std::invalid_argument("euclidean cloud: coordinate count mismatch");
    }
    require_finite(coords, "euclidean cloud");
    return PointCloud(Backend::Euclidean, n, dim, std::move(coords));
}

PointCloud PointCloud::function_grid(int n, int grid_points, std::vector<double> values) {
    if (n < 1 || grid_points < 2) {
        throw std::invalid_argument("function_grid cloud: need n >= 1 and at least 2 grid points");
    }
    if (values.size() != static_cast<std::size_t>(n) * grid_points) {
        throw std::invalid_argument("function_grid cloud: sample count mismatch");
    }
    require_finite(values, "function_grid cloud");
    PointCloud c(Backend::FunctionGrid, n, grid_points, std::move(values));
    c.weight_ = 1.0 / (grid_points - 1);
    return c;
}

PointCloud PointCloud::precomputed(int n, std::vector<double> dist_matrix) {
    if (n < 1) throw std::invalid_argument("precomputed cloud: n must be positive");
    if (dist_matrix.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("precomputed cloud: matrix must be n x n");
    }
    require_finite(dist_matrix, "precomputed cloud");
    for (int i = 0; i < n; ++i) {
        if (dist_matrix[static_cast<std::size_t>(i) * n + i] != 0.0) {
            throw std::invalid_argument("precomputed cloud: diagonal must be zero");
        }
        for (int j = i + 1; j < n; ++j) {
            const double dij = dist_matrix[static_cast<std::size_t>(i) * n + j];
            const double dji = dist_matrix[static_cast<std::size_t>(j) * n + i];
            if (dij != dji) throw std::invalid_argument("distance matrix not symmetric");
            if (dij < 0.0) throw std::invalid_argument("precomputed cloud: negative distance");
        }
    }
    return PointCloud(Backend::Precomputed, n, n, std::move(dist_matrix));
}

void PointCloud::check_index(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("point index out of range");
}

double PointCloud::sq_distance(int i, int j) const {
    check_index(i);
    check_index(j);
    switch (backend_) {
        case Backend::Euclidean:
        case Backend::FunctionGrid: {
            const double* a = row(i);
            const double* b = row(j);
            double s = 0.0;
            for (int k = 0; k < dim_; ++k) {
                const double d = a[k] - b[k];
                s += d * d;
            }
            return backend_ == Backend::FunctionGrid ? weight_ * s : s;
        }
        case Backend::Precomputed: {
            const double d = data_[static_cast<std::size_t>(i) * n_ + j];
            return d * d;
        }
    }
    return 0.0;
}

double PointCloud::distance(int i, int j) const {
    if (backend_ == Backend::Precomputed) {
        check_index(i);
        check_index(j);
        return data_[static_cast<std::size_t>(i) * n_ + j];
    }
    return std::sqrt(sq_distance(i, j));
}

PointCloud standardize(const PointCloud& cloud) {
    if (cloud.backend() != PointCloud::Backend::Euclidean) {
        throw std::invalid_argument("standardize: only euclidean clouds can be standardized");
    }
    const int n = cloud.size();
    const int d = cloud.dim();
    std::vector<double> out(static_cast<std::size_t>(n) * d);
    for (int k = 0; k < d; ++k) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += cloud.row(i)[k];
        mean /= n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) {
            const double c = cloud.row(i)[k] - mean;
            var += c * c;
        }
        var /= n;
        const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i) * d + k] = (cloud.row(i)[k] - mean) * scale;
        }
    }
    return PointCloud::euclidean(n, d, std::move(out));
}

ProductCloud::ProductCloud(std::vector<const PointCloud*> components)
    : parts_(std::move(components)) {
    if (parts_.empty()) throw std::invalid_argument("product cloud: needs at least one component");
    n_ = parts_.front()->size();
    for (const PointCloud* p : parts_) {
        if (p == nullptr) throw std::invalid_argument("product cloud: null component");
        if (p->size() != n_) throw std::invalid_argument("product cloud: component sizes differ");
    }
}

double ProductCloud::sq_distance(int i, int j) const {
    double s = 0.0;
    for (const PointCloud* p : parts_) s += p->sq_distance(i, j);
    return s;
}

double ProductCloud::distance(int i, int j) const {
    return std::sqrt(sq_distance(i, j));
}

} // namespace nnpsi
