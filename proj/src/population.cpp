#include "nnpsi/population.hpp"

#include <cmath>
#include <stdexcept>

#include "nnpsi/rng.hpp"

namespace nnpsi {

namespace {

constexpr double kMassTol = 1e-12;

void check_mass(double total) {
    if (std::fabs(total - 1.0) > kMassTol) {
        throw std::invalid_argument("finite joint: probabilities must sum to one");
    }
}

// Coupled-pair probabilities p_{i,j} = sum_m P(X=x_m) Q_i(x_m) Q_j(x_m) for a
// row-wise joint table. Rows with zero mass are skipped.
Eigen::MatrixXd coupling_matrix(const Eigen::MatrixXd& joint) {
    const int K = static_cast<int>(joint.cols());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(K, K);
    for (int m = 0; m < joint.rows(); ++m) {
        const double px = joint.row(m).sum();
        if (px <= 0.0) continue;
        for (int i = 0; i < K; ++i) {
            const double qi = joint(m, i) / px;
            if (qi == 0.0) continue;
            for (int j = 0; j < K; ++j) {
                p(i, j) += px * qi * (joint(m, j) / px);
            }
        }
    }
    return p;
}

double cramers_v(const Eigen::MatrixXd& joint) {
    const int K = static_cast<int>(joint.cols());
    const Eigen::VectorXd py = joint.colwise().sum();
    for (int k = 0; k < K; ++k) {
        if (py(k) <= 0.0) {
            throw std::domain_error("psi_population: a response level has zero mass");
        }
    }
    if (K < 2) throw std::domain_error("psi_population: need at least two response levels");
    const Eigen::MatrixXd pij = coupling_matrix(joint);
    double s = 0.0;
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            const double d = pij(i, j) - py(i) * py(j);
            s += d * d / (py(i) * py(j));
        }
    }
    return s / (K - 1);
}

// Var(Q(X)) with entries p_{i,j} - p_i p_j.
Eigen::MatrixXd var_q_of_x(const Eigen::MatrixXd& joint) {
    const Eigen::VectorXd py = joint.colwise().sum();
    return coupling_matrix(joint) - py * py.transpose();
}

// Var(Q(Y)): diagonal p_k - p_k^2, off-diagonal -p_k p_l.
Eigen::MatrixXd var_q_of_y(const Eigen::VectorXd& py) {
    Eigen::MatrixXd a = -(py * py.transpose());
    a.diagonal() = py.array() - py.array().square();
    return a;
}

double weighted_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& p, MatrixNorm norm) {
    const int K = static_cast<int>(p.size());
    if (norm == MatrixNorm::WeightedFrobenius) {
        double s = 0.0;
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) {
                s += a(i, j) * a(i, j) / (p(i) * p(j));
            }
        }
        return std::sqrt(s);
    }
    double tr = 0.0;
    for (int i = 0; i < K; ++i) tr += a(i, i) / p(i);
    return tr;
}

double norm_coefficient(const Eigen::MatrixXd& joint, MatrixNorm norm, GammaMap gamma) {
    const Eigen::VectorXd py = joint.colwise().sum();
    for (int k = 0; k < py.size(); ++k) {
        if (py(k) <= 0.0) {
            throw std::domain_error("psi_population_norm: a response level has zero mass");
        }
    }
    const double num = weighted_norm(var_q_of_x(joint), py, norm);
    const double den = weighted_norm(var_q_of_y(py), py, norm);
    const double ratio = num / den;
    return gamma == GammaMap::Square ? ratio * ratio : ratio;
}

} // namespace

FiniteJoint FiniteJoint::from_matrix(Eigen::MatrixXd prob) {
    if (prob.rows() < 1 || prob.cols() < 1) {
        throw std::invalid_argument("finite joint: empty table");
    }
    if ((prob.array() < 0.0).any()) {
        throw std::invalid_argument("finite joint: negative probability");
    }
    check_mass(prob.sum());
    for (int m = 0; m < prob.rows(); ++m) {
        if (prob.row(m).sum() <= 0.0) {
            throw std::invalid_argument("finite joint: X level with zero mass");
        }
    }
    FiniteJoint j;
    j.M_ = static_cast<int>(prob.rows());
    j.K_ = static_cast<int>(prob.cols());
    j.J_ = 0;
    j.xy_ = std::move(prob);
    return j;
}

FiniteJoint FiniteJoint::from_tensor(int x_levels, int z_levels, int y_levels,
                                     std::vector<double> probs) {
    if (x_levels < 1 || z_levels < 1 || y_levels < 1) {
        throw std::invalid_argument("finite joint: levels must be positive");
    }
    if (probs.size() != static_cast<std::size_t>(x_levels) * z_levels * y_levels) {
        throw std::invalid_argument("finite joint: tensor size mismatch");
    }
    double total = 0.0;
    for (double v : probs) {
        if (v < 0.0) throw std::invalid_argument("finite joint: negative probability");
        total += v;
    }
    check_mass(total);
    FiniteJoint j;
    j.M_ = x_levels;
    j.J_ = z_levels;
    j.K_ = y_levels;
    j.xy_ = Eigen::MatrixXd::Zero(x_levels, y_levels);
    for (int m = 0; m < x_levels; ++m) {
        for (int z = 0; z < z_levels; ++z) {
            for (int k = 0; k < y_levels; ++k) {
                j.xy_(m, k) += probs[(static_cast<std::size_t>(m) * z_levels + z) * y_levels + k];
            }
        }
    }
    for (int m = 0; m < x_levels; ++m) {
        if (j.xy_.row(m).sum() <= 0.0) {
            throw std::invalid_argument("finite joint: X level with zero mass");
        }
    }
    j.tensor_ = std::move(probs);
    return j;
}

Eigen::MatrixXd FiniteJoint::xz_y_joint() const {
    if (!has_z()) throw std::logic_error("finite joint: no Z coordinate");
    Eigen::MatrixXd full(M_ * J_, K_);
    for (int m = 0; m < M_; ++m) {
        for (int z = 0; z < J_; ++z) {
            for (int k = 0; k < K_; ++k) {
                full(m * J_ + z, k) = tensor_[(static_cast<std::size_t>(m) * J_ + z) * K_ + k];
            }
        }
    }
    // drop zero-mass product levels
    std::vector<int> keep;
    for (int r = 0; r < full.rows(); ++r) {
        if (full.row(r).sum() > 0.0) keep.push_back(r);
    }
    Eigen::MatrixXd out(keep.size(), K_);
    for (std::size_t a = 0; a < keep.size(); ++a) out.row(a) = full.row(keep[a]);
    return out;
}

double psi_population(const FiniteJoint& j) {
    return cramers_v(j.xy_joint());
}

double psi_population_norm(const FiniteJoint& j, MatrixNorm norm, GammaMap gamma) {
    return norm_coefficient(j.xy_joint(), norm, gamma);
}

double psi_population_conditional(const FiniteJoint& j) {
    if (!j.has_z()) throw std::logic_error("psi_population_conditional: joint has no Z");
    const double base = cramers_v(j.xy_joint());
    if (1.0 - base <= 1e-12) {
        throw std::domain_error(
            "psi_population_conditional: psi(X,Y) = 1, conditional measure undefined");
    }
    const double joint_xz = cramers_v(j.xz_y_joint());
    return (joint_xz - base) / (1.0 - base);
}

CoupledSample sample_coupled(const FiniteJoint& j, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_coupled: n must be positive");
    const Eigen::MatrixXd& joint = j.xy_joint();
    const int M = j.x_levels();
    const int K = j.y_levels();
    Eigen::VectorXd px(M);
    for (int m = 0; m < M; ++m) px(m) = joint.row(m).sum();

    Rng rng(seed);
    CoupledSample out;
    out.x.resize(n);
    std::vector<int> ycodes(n);
    for (int i = 0; i < n; ++i) {
        // X by inverse CDF over levels
        const double ux = rng.uniform01();
        int m = 0;
        double acc = px(0);
        while (m + 1 < M && ux >= acc) acc += px(++m);
        out.x[i] = m;
        // Y = min{ k : sum_{j<=k} Q_j(X) > U }
        const double u = rng.uniform01();
        double q = 0.0;
        int k = K - 1;
        for (int cand = 0; cand < K; ++cand) {
            q += joint(m, cand) / px(m);
            if (q > u) {
                k = cand;
                break;
            }
        }
        ycodes[i] = k;
    }
    out.y = LabelVector::from_ints(ycodes);
    return out;
}

} // namespace nnpsi
