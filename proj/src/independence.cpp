#include "nnpsi/independence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nnpsi/special_functions.hpp"

namespace nnpsi {

namespace {

constexpr double kWnGuard = 1e-6;     // degenerate-graph guard for K >= 3
constexpr double kCondLimit = 1e12;   // condition-number cutoff for Sigmahat

void check_simplex(const Eigen::VectorXd& p, double w) {
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("sigma: w must lie in [0,1]");
    double total = 0.0;
    for (int k = 0; k < p.size(); ++k) {
        if (p(k) <= 0.0) throw std::invalid_argument("sigma: probabilities must be positive");
        total += p(k);
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("sigma: probabilities must sum to one");
    }
}

} // namespace

double sigma_entry(const Eigen::VectorXd& p, double w, int k1, int l1, int k2, int l2) {
    const int K = static_cast<int>(p.size());
    if (k1 < 0 || l1 < 0 || k2 < 0 || l2 < 0 || k1 >= K - 1 || l1 >= K - 1 || k2 >= K - 1 ||
        l2 >= K - 1) {
        throw std::out_of_range("sigma_entry: indices must lie in 0..K-2");
    }
    double s = p(k1) * p(l1) * p(k2) * p(l2) * (1.0 + w);
    s -= p(k1) * p(l1) * p(l2) * ((k1 == k2 ? 1.0 : 0.0) + w * (l1 == k2 ? 1.0 : 0.0));
    s -= p(k1) * p(l1) * p(k2) * ((l1 == l2 ? 1.0 : 0.0) + w * (k1 == l2 ? 1.0 : 0.0));
    s += p(k1) * p(l1) * ((k1 == k2 && l1 == l2 ? 1.0 : 0.0) +
                          w * (k1 == l2 && l1 == k2 ? 1.0 : 0.0));
    return s;
}

Eigen::MatrixXd sigma_matrix(const Eigen::VectorXd& p, double w, int K) {
    if (static_cast<int>(p.size()) != K) {
        throw std::invalid_argument("sigma_matrix: probability vector must have K entries");
    }
    check_simplex(p, w);
    const int m = K - 1;
    Eigen::MatrixXd sigma(m * m, m * m);
    for (int l1 = 0; l1 < m; ++l1) {
        for (int k1 = 0; k1 < m; ++k1) {
            for (int l2 = 0; l2 < m; ++l2) {
                for (int k2 = 0; k2 < m; ++k2) {
                    sigma(l1 * m + k1, l2 * m + k2) = sigma_entry(p, w, k1, l1, k2, l2);
                }
            }
        }
    }
    return sigma;
}

double sigma_det_closed_form(const Eigen::VectorXd& p, double w, int K) {
    if (static_cast<int>(p.size()) != K) {
        throw std::invalid_argument("sigma_det_closed_form: probability vector must have K entries");
    }
    check_simplex(p, w);
    double prod = 1.0;
    for (int k = 0; k < K; ++k) prod *= std::pow(p(k), 2.0 * (K - 1));
    return std::pow(1.0 + w, K * (K - 1) / 2.0) * std::pow(1.0 - w, (K - 1) * (K - 2) / 2.0) * prod;
}

double chi2_sf(double x, int df) {
    if (x < 0.0) throw std::invalid_argument("chi2_sf: x must be nonnegative");
    if (df < 1) throw std::invalid_argument("chi2_sf: df must be positive");
    return gamma_q(0.5 * df, 0.5 * x);
}

namespace {

// Restrict the table to levels Y actually takes. Unlike psi_hat's reduction
// this keeps levels with zero column (neighbor) mass: the covariance only
// involves the row marginals, and dropping observed mass would distort P_n.
struct TestTable {
    Eigen::MatrixXd joint;
    Eigen::VectorXd row, col;
    bool dropped = false;
};

TestTable observed_levels(const ContingencyCounts& c) {
    std::vector<int> keep;
    for (int k = 0; k < c.K; ++k) {
        if (c.row(k) > 0.0) keep.push_back(k);
    }
    TestTable t;
    if (static_cast<int>(keep.size()) == c.K) {
        t.joint = c.joint;
    } else {
        t.dropped = true;
        t.joint.resize(keep.size(), keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a) {
            for (std::size_t b = 0; b < keep.size(); ++b) {
                t.joint(a, b) = c.joint(keep[a], keep[b]);
            }
        }
    }
    t.row = t.joint.rowwise().sum();
    t.col = t.joint.colwise().sum();
    return t;
}

double quadratic_form(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& pn,
                      std::vector<std::string>& warnings) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (lmin <= 0.0 || lmax / lmin > kCondLimit) {
        throw std::domain_error("independence_statistic: covariance estimate is ill-conditioned");
    }
    if (lmax / lmin > 1e8) {
        warnings.push_back("covariance estimate is nearly singular");
    }
    const Eigen::VectorXd x = es.eigenvectors() *
                              (es.eigenvectors().transpose() * pn).cwiseQuotient(es.eigenvalues());
    return pn.dot(x);
}

} // namespace

TestReport independence_statistic(const ContingencyCounts& c, const NeighborGraph& g) {
    if (c.n != g.n) throw std::invalid_argument("independence_statistic: size mismatch");
    TestReport rep;
    rep.n = c.n;
    rep.w_n = g.mutual_fraction();
    rep.w_n_prime = g.shared_neighbor_count();
    rep.l_n = g.max_in_degree();
    if (rep.l_n >= std::pow(g.n, 0.25)) {
        rep.warnings.push_back("maximal in-degree L_n exceeds n^(1/4); asymptotics may be unreliable");
    }
    if (g.had_ties) rep.warnings.push_back("exact distance ties were broken by smallest index");

    const TestTable t = observed_levels(c);
    const int K = static_cast<int>(t.joint.rows());
    if (t.dropped) rep.warnings.push_back("dropped response levels never observed in the sample");
    if (K < 2) {
        throw std::domain_error("independence_statistic: fewer than two observed levels");
    }
    rep.K = K;
    rep.df = (K - 1) * (K - 1);
    if (K >= 3 && rep.w_n > 1.0 - kWnGuard) {
        throw std::domain_error(
            "independence_statistic: degenerate neighbor graph (W_n at the singular limit)");
    }

    const int m = K - 1;
    Eigen::VectorXd pn(m * m);
    const double sqrt_n = std::sqrt(static_cast<double>(c.n));
    for (int l = 0; l < m; ++l) {
        for (int k = 0; k < m; ++k) {
            pn(l * m + k) = sqrt_n * (t.joint(k, l) - t.row(k) * t.col(l));
        }
    }
    const Eigen::MatrixXd sigma = sigma_matrix(t.row, rep.w_n, K);
    rep.statistic = quadratic_form(sigma, pn, rep.warnings);
    if (rep.statistic < 0.0 && rep.statistic > -1e-12) rep.statistic = 0.0;
    rep.p_value = chi2_sf(rep.statistic, rep.df);

    try {
        rep.psi_hat = psi_hat(c).value;
    } catch (const std::domain_error&) {
        rep.psi_hat = std::numeric_limits<double>::quiet_NaN();
        rep.warnings.push_back("psi_hat undefined after empty-level removal");
    }
    return rep;
}

TestReport binary_statistic(const ContingencyCounts& c, int ambient_dim, bool as_printed) {
    const TestTable t = observed_levels(c);
    if (t.joint.rows() != 2) {
        throw std::invalid_argument("binary_statistic: requires exactly two observed levels");
    }
    TestReport rep;
    rep.n = c.n;
    rep.K = 2;
    rep.df = 1;
    const double g = gamma_d(ambient_dim);
    rep.w_n = g;
    rep.warnings.push_back("binary test with plug-in gamma_d in place of the empirical W_n");
    const double p1 = t.row(0);
    const double q1 = t.col(0);
    const double dev = t.joint(0, 0) - p1 * q1;
    double denom;
    if (as_printed) {
        // literal (p1 q1)^2 normalization; inconsistent with the K = 2
        // covariance specialization unless p1 = 1/2
        denom = (p1 * q1) * (p1 * q1);
        rep.warnings.push_back("as-printed normalization (p1 q1)^2");
    } else {
        denom = p1 * p1 * (1.0 - p1) * (1.0 - p1);
    }
    if (denom <= 0.0) {
        throw std::domain_error("binary_statistic: degenerate marginals");
    }
    rep.statistic = static_cast<double>(c.n) * dev * dev / (denom * (1.0 + g));
    rep.p_value = chi2_sf(rep.statistic, 1);
    try {
        rep.psi_hat = psi_hat(c).value;
    } catch (const std::domain_error&) {
        rep.psi_hat = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

} // namespace nnpsi
