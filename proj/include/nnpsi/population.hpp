#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nnpsi/contingency.hpp"

namespace nnpsi {

/// Fully specified finite joint distribution of (X, Y), optionally extended
/// with a third coordinate Z. This is the exact ground-truth engine: all
/// population coefficients are evaluated by brute-force summation over the
/// support, with no sampling involved.
class FiniteJoint {
public:
    /// prob(m, k) = P(X = x_m, Y = k). Every row must carry positive mass.
    static FiniteJoint from_matrix(Eigen::MatrixXd prob);

    /// probs laid out as [m][j][k] for P(X = x_m, Z = z_j, Y = k).
    static FiniteJoint from_tensor(int x_levels, int z_levels, int y_levels,
                                   std::vector<double> probs);

    int x_levels() const { return M_; }
    int z_levels() const { return J_; }
    int y_levels() const { return K_; }
    bool has_z() const { return J_ > 0; }

    /// Marginal joint of (X, Y); for tensors, Z is summed out.
    const Eigen::MatrixXd& xy_joint() const { return xy_; }

    /// Joint of ((X, Z), Y) with the M*J product levels as rows; rows with
    /// zero mass are dropped. Requires has_z().
    Eigen::MatrixXd xz_y_joint() const;

private:
    FiniteJoint() = default;
    int M_ = 0, J_ = 0, K_ = 0;
    Eigen::MatrixXd xy_;
    std::vector<double> tensor_;  // empty when J_ == 0
};

/// psi(X, Y) evaluated exactly through the coupling probabilities
/// p_{i,j} = sum_m P(X = x_m) Q_i(x_m) Q_j(x_m).
double psi_population(const FiniteJoint& j);

/// Alternative-norm population coefficient gamma(||Var(Q(X))|| / ||Var(Q(Y))||).
double psi_population_norm(const FiniteJoint& j, MatrixNorm norm, GammaMap gamma);

/// Conditional coefficient (psi((X,Z),Y) - psi(X,Y)) / (1 - psi(X,Y)).
/// Throws when psi(X, Y) = 1, where conditional dependence is undefined.
double psi_population_conditional(const FiniteJoint& j);

struct CoupledSample {
    std::vector<int> x;  // X level per draw, 0-based
    LabelVector y;
};

/// i.i.d. draws with Y generated by the inverse-CDF coupling construction
/// applied to an independent uniform.
CoupledSample sample_coupled(const FiniteJoint& j, int n, std::uint64_t seed);

} // namespace nnpsi
