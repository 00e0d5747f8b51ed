#include "nnpsi/contingency.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace nnpsi {

namespace {

template <typename T>
LabelVector recode(const std::vector<T>& raw, std::string (*to_name)(const T&)) {
    LabelVector y;
    y.codes.reserve(raw.size());
    std::map<T, int> seen;
    for (const T& v : raw) {
        auto it = seen.find(v);
        if (it == seen.end()) {
            const int code = static_cast<int>(seen.size()) + 1;
            seen.emplace(v, code);
            y.level_names.push_back(to_name(v));
            y.codes.push_back(code);
        } else {
            y.codes.push_back(it->second);
        }
    }
    y.K = static_cast<int>(seen.size());
    return y;
}

} // namespace

LabelVector LabelVector::from_strings(const std::vector<std::string>& raw) {
    return recode<std::string>(raw, +[](const std::string& s) { return s; });
}

LabelVector LabelVector::from_ints(const std::vector<int>& raw) {
    return recode<int>(raw, +[](const int& v) { return std::to_string(v); });
}

LabelVector LabelVector::from_codes(std::vector<int> codes) {
    LabelVector y;
    y.K = 0;
    for (int c : codes) {
        if (c < 1) throw std::invalid_argument("label codes must be >= 1");
        y.K = std::max(y.K, c);
    }
    std::vector<bool> present(y.K, false);
    for (int c : codes) present[c - 1] = true;
    for (int k = 0; k < y.K; ++k) {
        if (!present[k]) {
            throw std::invalid_argument("label codes must cover 1..K without gaps");
        }
        y.level_names.push_back(std::to_string(k + 1));
    }
    y.codes = std::move(codes);
    return y;
}

ContingencyCounts contingency(const LabelVector& y, const NeighborGraph& g) {
    const int n = g.n;
    if (static_cast<int>(y.codes.size()) != n) {
        throw std::invalid_argument("contingency: label vector and graph size differ");
    }
    const int K = y.K;
    ContingencyCounts c;
    c.n = n;
    c.K = K;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(K, K);
    for (int i = 0; i < n; ++i) {
        counts(y.codes[i] - 1, y.codes[g.nbr[i]] - 1) += 1.0;
    }
    c.joint = counts / static_cast<double>(n);
    c.row = c.joint.rowwise().sum();
    c.col = c.joint.colwise().sum();
    return c;
}

ReducedTable drop_empty_levels(const ContingencyCounts& c) {
    std::vector<int> kept(c.K);
    for (int k = 0; k < c.K; ++k) kept[k] = k;
    Eigen::MatrixXd joint = c.joint;
    bool dropped = false;
    // removing a level can zero out another level's remaining mass, so iterate
    for (;;) {
        const Eigen::VectorXd row = joint.rowwise().sum();
        const Eigen::VectorXd col = joint.colwise().sum();
        std::vector<int> keep;
        for (int k = 0; k < static_cast<int>(kept.size()); ++k) {
            if (row(k) > 0.0 && col(k) > 0.0) keep.push_back(k);
        }
        if (static_cast<int>(keep.size()) == joint.rows()) break;
        dropped = true;
        Eigen::MatrixXd sub(keep.size(), keep.size());
        std::vector<int> kept_next(keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a) {
            kept_next[a] = kept[keep[a]];
            for (std::size_t b = 0; b < keep.size(); ++b) {
                sub(a, b) = joint(keep[a], keep[b]);
            }
        }
        joint = std::move(sub);
        kept = std::move(kept_next);
        if (joint.rows() == 0) break;
    }
    ReducedTable r;
    const double mass = joint.sum();
    if (mass > 0.0 && dropped) joint /= mass;
    r.joint = std::move(joint);
    r.row = r.joint.rowwise().sum();
    r.col = r.joint.colwise().sum();
    r.kept = std::move(kept);
    r.dropped = dropped;
    return r;
}

PsiResult psi_hat(const ContingencyCounts& c) {
    const ReducedTable t = drop_empty_levels(c);
    const int K = static_cast<int>(t.kept.size());
    if (K < 2) {
        throw std::domain_error("psi_hat: fewer than two observed levels, coefficient undefined");
    }
    double s = 0.0;
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < K; ++l) {
            const double pq = t.row(k) * t.col(l);
            const double d = t.joint(k, l) - pq;
            s += d * d / pq;
        }
    }
    return PsiResult{s / (K - 1), K, t.dropped};
}

PsiResult psi_hat_norm(const ContingencyCounts& c, MatrixNorm norm, GammaMap gamma) {
    const ReducedTable t = drop_empty_levels(c);
    const int K = static_cast<int>(t.kept.size());
    if (K < 2) {
        throw std::domain_error("psi_hat_norm: fewer than two observed levels, coefficient undefined");
    }
    // plug-in Var(Q(X)) with the joint symmetrized; weight by D = diag(phat)
    double value = 0.0;
    if (norm == MatrixNorm::WeightedFrobenius) {
        double fro2 = 0.0;
        for (int k = 0; k < K; ++k) {
            for (int l = 0; l < K; ++l) {
                const double s = 0.5 * (t.joint(k, l) + t.joint(l, k)) - t.row(k) * t.col(l);
                fro2 += s * s / (t.row(k) * t.row(l));
            }
        }
        const double ratio2 = fro2 / (K - 1);
        value = gamma == GammaMap::Square ? ratio2 : std::sqrt(ratio2);
    } else {
        double tr = 0.0;
        for (int k = 0; k < K; ++k) {
            tr += (t.joint(k, k) - t.row(k) * t.col(k)) / t.row(k);
        }
        const double ratio = tr / (K - 1);
        value = gamma == GammaMap::Square ? ratio * ratio : ratio;
    }
    return PsiResult{value, K, t.dropped};
}

} // namespace nnpsi
