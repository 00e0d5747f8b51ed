#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnpsi/contingency.hpp"
#include "nnpsi/point_cloud.hpp"

namespace nnpsi {

/// Synthetic data generators.
///  - sin:     X uniform on [0,1]^2, Y = 1{sin(2 pi (X1 + X2)) >= 0}
///  - max:     X a Brownian path on an m-point grid, Y = 1{max X(t) >= 1}
///  - mixture: Y picks (fair coin) between a Brownian path and the damped
///             sine series sum_{k<=20} Z_k sin(pi k t), Z_k ~ N(0, 0.5^k)
///  - degree:  Y uniform on degrees 0..8, X a random polynomial of degree Y
///             with coefficients uniform on [0,1], sampled on the grid
struct SimSetting {
    enum class Kind { Sin, Max, Mixture, Degree };
    Kind kind = Kind::Sin;
    int n = 100;
    int grid = 100;  // discretization for the functional kinds
    std::uint64_t seed = 0;
};

SimSetting::Kind parse_setting(const std::string& name);
std::string setting_name(SimSetting::Kind kind);

struct SimSample {
    PointCloud x;
    LabelVector y;
};

SimSample generate(const SimSetting& setting);

/// Noise mixing: each label is kept with probability lambda and otherwise
/// replaced by a draw from the empirical marginal of y. lambda = 1 returns
/// the input unchanged; lambda = 0 detaches the labels from the covariates.
LabelVector mix_labels(const LabelVector& y, double lambda, std::uint64_t seed);

struct PowerCurve {
    std::vector<double> lambdas;
    std::vector<double> rejections;  // rejection rate per lambda
    int reps = 0;
    double alpha = 0.05;
    int n = 0;
    std::string setting;
    int degenerate = 0;  // replications counted as non-rejections due to errors
};

/// Monte-Carlo power estimation over a lambda grid. Replication r draws its
/// randomness from streams derived from (seed, r) only, so any single
/// replication can be reproduced in isolation and results are independent
/// of the parallel schedule.
PowerCurve power_curve(const SimSetting& base, const std::vector<double>& lambdas, int reps,
                       double alpha, std::uint64_t seed);

std::string power_curve_csv(const PowerCurve& pc);

struct CalibrationReport {
    double ks_distance = 0.0;
    double rejection_rate = 0.0;
    int reps = 0;
    int n = 0;
    int K = 0;
    int df = 0;
    double alpha = 0.05;
    int degenerate = 0;
};

/// Null-distribution check: X uniform on [0,1]^2 and Y an independent
/// uniform label over K levels; reports the rejection rate at level alpha
/// and the Kolmogorov-Smirnov distance between the replicated statistics
/// and the chi-squared((K-1)^2) distribution.
CalibrationReport null_calibration(int n, int K, int reps, double alpha, std::uint64_t seed);

/// Two-sided KS distance between a sample and the chi-squared(df) CDF.
double ks_distance_chi2(std::vector<double> sample, int df);

} // namespace nnpsi
