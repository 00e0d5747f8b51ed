#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nnpsi/contingency.hpp"
#include "nnpsi/neighbor_graph.hpp"

namespace nnpsi {

/// One entry of the conditional covariance matrix of the centered, scaled
/// contingency vector. p holds all K level probabilities; indices are
/// 0-based and range over 0..K-2.
double sigma_entry(const Eigen::VectorXd& p, double w, int k1, int l1, int k2, int l2);

/// Full (K-1)^2 x (K-1)^2 covariance matrix, entries via sigma_entry with
/// pairs (k,l) in column-vectorized order.
Eigen::MatrixXd sigma_matrix(const Eigen::VectorXd& p, double w, int K);

/// Closed-form determinant
///   (1+w)^{K(K-1)/2} (1-w)^{(K-1)(K-2)/2} prod_i p_i^{2(K-1)}.
double sigma_det_closed_form(const Eigen::VectorXd& p, double w, int K);

/// Survival function of the chi-squared distribution with df degrees of
/// freedom, through the upper regularized incomplete gamma.
double chi2_sf(double x, int df);

struct TestReport {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    double psi_hat = 0.0;
    double w_n = 0.0;
    double w_n_prime = 0.0;
    int l_n = 0;
    int n = 0;
    int K = 0;
    std::vector<std::string> warnings;
};

/// The quadratic-form independence statistic I_n = P_n' Sigmahat^{-1} P_n
/// with its chi-squared((K-1)^2) p-value. Levels never observed in Y are
/// dropped before forming P_n. Throws on degenerate graphs (W_n at its
/// singular upper end for K >= 3), on ill-conditioned covariance estimates
/// and when fewer than two levels remain.
TestReport independence_statistic(const ContingencyCounts& c, const NeighborGraph& g);

/// Binary-response variant with the geometric constant gamma_d plugged in
/// for W_n; requires K = 2 and euclidean data of the given dimension. With
/// as_printed the literal (phat1 qhat1)^2 normalization is used
/// instead of the covariance-consistent phat1^2 (1-phat1)^2.
TestReport binary_statistic(const ContingencyCounts& c, int ambient_dim, bool as_printed = false);

} // namespace nnpsi
