#pragma once

#include <string>
#include <vector>

#include "nnpsi/contingency.hpp"
#include "nnpsi/point_cloud.hpp"

namespace nnpsi {

/// Parsed CSV table: first row is the header, comma separated, '.' decimal.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

struct Dataset {
    PointCloud x;
    LabelVector y;
    std::vector<std::string> covariate_names;
};

/// Assemble a dataset from a CSV file. The response column is recoded by
/// first appearance; covariate columns must parse as finite numbers (errors
/// name the offending row and column). An empty covariate list selects every
/// non-response column. With as_grid the covariate columns are interpreted
/// as function samples on a uniform grid.
Dataset parse_dataset(const std::string& path, const std::string& response,
                      const std::vector<std::string>& covariates = {}, bool as_grid = false);

/// Labels only (for distance-matrix mode).
LabelVector parse_labels(const std::string& path, const std::string& response);

/// Square symmetric nonnegative distance matrix from a headerless or
/// headered CSV of numbers.
PointCloud parse_distance_matrix(const std::string& path);

} // namespace nnpsi
