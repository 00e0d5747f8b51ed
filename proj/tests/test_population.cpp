#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nnpsi/population.hpp"
#include "nnpsi/rng.hpp"

using nnpsi::FiniteJoint;
using nnpsi::GammaMap;
using nnpsi::MatrixNorm;

namespace {

Eigen::MatrixXd table1_joint(double eps) {
    Eigen::MatrixXd prob(2, 3);
    prob << 0.0, 1.0 - eps, eps / 2.0,
            eps / 2.0, 0.0, 0.0;
    return prob;
}

// Independent route: psi through Cov(Q_i(X), Q_j(X)) weighted by (D x D)^{-1},
// i.e. sum_{ij} Cov_ij^2 / (p_i p_j) / (K-1).
double psi_via_cov_q(const Eigen::MatrixXd& prob) {
    const int M = static_cast<int>(prob.rows());
    const int K = static_cast<int>(prob.cols());
    Eigen::VectorXd px(M), py(K);
    for (int m = 0; m < M; ++m) px(m) = prob.row(m).sum();
    for (int k = 0; k < K; ++k) py(k) = prob.col(k).sum();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(K, K);
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            double e = 0.0;
            for (int m = 0; m < M; ++m) {
                e += px(m) * (prob(m, i) / px(m)) * (prob(m, j) / px(m));
            }
            cov(i, j) = e - py(i) * py(j);
        }
    }
    double s = 0.0;
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) s += cov(i, j) * cov(i, j) / (py(i) * py(j));
    }
    return s / (K - 1);
}

Eigen::MatrixXd random_joint(nnpsi::Rng& rng, int M, int K) {
    Eigen::MatrixXd prob(M, K);
    double total = 0.0;
    for (int m = 0; m < M; ++m) {
        for (int k = 0; k < K; ++k) {
            prob(m, k) = 0.05 + rng.uniform01();
            total += prob(m, k);
        }
    }
    return prob / total;
}

std::vector<double> random_tensor(nnpsi::Rng& rng, int M, int J, int K) {
    std::vector<double> t(static_cast<std::size_t>(M) * J * K);
    double total = 0.0;
    for (double& v : t) {
        v = 0.05 + rng.uniform01();
        total += v;
    }
    for (double& v : t) v /= total;
    return t;
}

} // namespace

TEST_CASE("psi is 1/2 on the three-level table for every epsilon") {
    for (double eps : {0.1, 0.5, 0.9}) {
        const FiniteJoint j = FiniteJoint::from_matrix(table1_joint(eps));
        CHECK(std::fabs(nnpsi::psi_population(j) - 0.5) < 1e-12);
    }
}

TEST_CASE("independent joints give zero, functional joints give one") {
    nnpsi::Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const int M = 2 + rng.uniform_int(4);
        const int K = 2 + rng.uniform_int(4);
        Eigen::VectorXd px(M), py(K);
        double sx = 0, sy = 0;
        for (int m = 0; m < M; ++m) { px(m) = 0.1 + rng.uniform01(); sx += px(m); }
        for (int k = 0; k < K; ++k) { py(k) = 0.1 + rng.uniform01(); sy += py(k); }
        px /= sx; py /= sy;
        const FiniteJoint indep = FiniteJoint::from_matrix(px * py.transpose());
        CHECK(std::fabs(nnpsi::psi_population(indep)) < 1e-14);
        // functional: X level m maps to Y level m, square table
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(K, K);
        for (int k = 0; k < K; ++k) f(k, k) = py(k);
        CHECK(std::fabs(nnpsi::psi_population(FiniteJoint::from_matrix(f)) - 1.0) < 1e-12);
    }
}

TEST_CASE("coupling route equals the Cov(Q) route") {
    nnpsi::Rng rng(41);
    for (int rep = 0; rep < 200; ++rep) {
        const int M = 2 + rng.uniform_int(5);
        const int K = 2 + rng.uniform_int(4);
        const Eigen::MatrixXd prob = random_joint(rng, M, K);
        const double a = nnpsi::psi_population(FiniteJoint::from_matrix(prob));
        const double b = psi_via_cov_q(prob);
        CHECK(std::fabs(a - b) < 1e-12);
        CHECK(a >= -1e-15);
        CHECK(a <= 1.0 + 1e-12);
    }
}

TEST_CASE("norm coefficients") {
    nnpsi::Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::MatrixXd prob = random_joint(rng, 3, 3);
        const FiniteJoint j = FiniteJoint::from_matrix(prob);
        // weighted Frobenius + square is exactly psi
        CHECK(std::fabs(nnpsi::psi_population_norm(j, MatrixNorm::WeightedFrobenius,
                                                   GammaMap::Square) -
                        nnpsi::psi_population(j)) < 1e-12);
    }
    // independent: zero under the trace norm; functional: one
    Eigen::MatrixXd indep(2, 2);
    indep << 0.2 * 0.5, 0.2 * 0.5, 0.8 * 0.5, 0.8 * 0.5;
    CHECK(std::fabs(nnpsi::psi_population_norm(FiniteJoint::from_matrix(indep),
                                               MatrixNorm::WeightedTrace, GammaMap::Identity)) <
          1e-14);
    Eigen::MatrixXd f(2, 2);
    f << 0.3, 0.0, 0.0, 0.7;
    CHECK(std::fabs(nnpsi::psi_population_norm(FiniteJoint::from_matrix(f),
                                               MatrixNorm::WeightedTrace, GammaMap::Identity) -
                    1.0) < 1e-12);
}

TEST_CASE("information gain and monotone norms on random (X,Z,Y)") {
    nnpsi::Rng rng(47);
    for (int rep = 0; rep < 200; ++rep) {
        const int M = 2 + rng.uniform_int(3);
        const int J = 2 + rng.uniform_int(3);
        const int K = 2 + rng.uniform_int(3);
        const FiniteJoint j = FiniteJoint::from_tensor(M, J, K, random_tensor(rng, M, J, K));
        const FiniteJoint xz = FiniteJoint::from_matrix(j.xz_y_joint());
        const double base = nnpsi::psi_population(FiniteJoint::from_matrix(j.xy_joint()));
        const double gained = nnpsi::psi_population(xz);
        CHECK(gained >= base - 1e-12);
        for (MatrixNorm norm : {MatrixNorm::WeightedFrobenius, MatrixNorm::WeightedTrace}) {
            const double nb = nnpsi::psi_population_norm(FiniteJoint::from_matrix(j.xy_joint()),
                                                         norm, GammaMap::Identity);
            const double ng = nnpsi::psi_population_norm(xz, norm, GammaMap::Identity);
            CHECK(ng >= nb - 1e-12);
        }
        const double cond = nnpsi::psi_population_conditional(j);
        CHECK(cond >= -1e-12);
        CHECK(cond <= 1.0 + 1e-12);
    }
}

TEST_CASE("conditional coefficient trivial cases") {
    nnpsi::Rng rng(53);
    // Z independent of (X, Y): conditional psi is zero
    const Eigen::MatrixXd xy = random_joint(rng, 3, 3);
    std::vector<double> tensor(3 * 2 * 3);
    const double pz[2] = {0.4, 0.6};
    for (int m = 0; m < 3; ++m) {
        for (int z = 0; z < 2; ++z) {
            for (int k = 0; k < 3; ++k) {
                tensor[(m * 2 + z) * 3 + k] = xy(m, k) * pz[z];
            }
        }
    }
    const FiniteJoint indep_z = FiniteJoint::from_tensor(3, 2, 3, tensor);
    CHECK(std::fabs(nnpsi::psi_population_conditional(indep_z)) < 1e-12);

    // Z = Y as a coordinate: conditional psi is one (if psi(X,Y) < 1)
    std::vector<double> zy(3 * 3 * 3, 0.0);
    for (int m = 0; m < 3; ++m) {
        for (int k = 0; k < 3; ++k) {
            zy[(m * 3 + k) * 3 + k] = xy(m, k);
        }
    }
    const FiniteJoint z_is_y = FiniteJoint::from_tensor(3, 3, 3, zy);
    CHECK(std::fabs(nnpsi::psi_population_conditional(z_is_y) - 1.0) < 1e-12);

    // XOR: psi(X,Y) = 0 but psi((X,Z),Y) = 1
    std::vector<double> xorj(2 * 2 * 2, 0.0);
    for (int x = 0; x < 2; ++x) {
        for (int z = 0; z < 2; ++z) {
            xorj[(x * 2 + z) * 2 + (x ^ z)] = 0.25;
        }
    }
    const FiniteJoint x_xor = FiniteJoint::from_tensor(2, 2, 2, xorj);
    CHECK(std::fabs(nnpsi::psi_population(x_xor)) < 1e-14);
    CHECK(std::fabs(nnpsi::psi_population_conditional(x_xor) - 1.0) < 1e-12);
}

TEST_CASE("conditional coefficient undefined at full dependence") {
    // Y = X and Z arbitrary: psi(X,Y) = 1
    std::vector<double> t(2 * 2 * 2, 0.0);
    t[(0 * 2 + 0) * 2 + 0] = 0.25;
    t[(0 * 2 + 1) * 2 + 0] = 0.25;
    t[(1 * 2 + 0) * 2 + 1] = 0.25;
    t[(1 * 2 + 1) * 2 + 1] = 0.25;
    const FiniteJoint j = FiniteJoint::from_tensor(2, 2, 2, t);
    CHECK_THROWS_AS(nnpsi::psi_population_conditional(j), std::domain_error);
}

TEST_CASE("finite joint validation") {
    Eigen::MatrixXd bad(2, 2);
    bad << 0.5, 0.5, 0.0, 0.0;  // zero-mass X level
    CHECK_THROWS_AS(FiniteJoint::from_matrix(bad), std::invalid_argument);
    Eigen::MatrixXd neg(1, 2);
    neg << 1.2, -0.2;
    CHECK_THROWS_AS(FiniteJoint::from_matrix(neg), std::invalid_argument);
    Eigen::MatrixXd off(1, 2);
    off << 0.6, 0.6;
    CHECK_THROWS_AS(FiniteJoint::from_matrix(off), std::invalid_argument);
    // degenerate Y level rejected by the coefficient
    Eigen::MatrixXd degen(2, 2);
    degen << 0.5, 0.0, 0.5, 0.0;
    CHECK_THROWS_AS(nnpsi::psi_population(FiniteJoint::from_matrix(degen)), std::domain_error);
}

TEST_CASE("coupled sampler") {
    SUBCASE("deterministic joint stays on the support") {
        Eigen::MatrixXd f(2, 2);
        f << 0.3, 0.0, 0.0, 0.7;
        const auto s = nnpsi::sample_coupled(FiniteJoint::from_matrix(f), 500, 9);
        // every draw with the same X level carries the same Y label
        int code_of_x[2] = {0, 0};
        for (int i = 0; i < 500; ++i) {
            int& c = code_of_x[s.x[i]];
            if (c == 0) c = s.y.codes[i];
            CHECK(s.y.codes[i] == c);
        }
    }
    SUBCASE("frequencies approach the table") {
        const FiniteJoint j = FiniteJoint::from_matrix(table1_joint(0.5));
        const int n = 100000;
        const auto s = nnpsi::sample_coupled(j, n, 12345);
        Eigen::MatrixXd freq = Eigen::MatrixXd::Zero(2, 3);
        for (int i = 0; i < n; ++i) {
            // recover the raw Y level from the level name
            const int k = std::stoi(s.y.level_names[s.y.codes[i] - 1]);
            freq(s.x[i], k) += 1.0;
        }
        freq /= n;
        const Eigen::MatrixXd target = table1_joint(0.5);
        for (int m = 0; m < 2; ++m) {
            for (int k = 0; k < 3; ++k) {
                CHECK(std::fabs(freq(m, k) - target(m, k)) < 0.01);
            }
        }
    }
    SUBCASE("same seed reproduces the draw") {
        const FiniteJoint j = FiniteJoint::from_matrix(table1_joint(0.3));
        const auto a = nnpsi::sample_coupled(j, 100, 77);
        const auto b = nnpsi::sample_coupled(j, 100, 77);
        CHECK(a.x == b.x);
        CHECK(a.y.codes == b.y.codes);
    }
}
