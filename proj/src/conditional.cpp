#include "nnpsi/conditional.hpp"

#include <cmath>
#include <stdexcept>

namespace nnpsi {

namespace {

double psi_of_product(const std::vector<const PointCloud*>& parts, const LabelVector& y) {
    const ProductCloud pc(parts);
    const NeighborGraph g = build_neighbor_graph(pc);
    return psi_hat(contingency(y, g)).value;
}

} // namespace

double psi_conditional_hat(const PointCloud& x, const PointCloud& z, const LabelVector& y) {
    if (x.size() != z.size() || static_cast<int>(y.codes.size()) != x.size()) {
        throw std::invalid_argument("psi_conditional_hat: input sizes differ");
    }
    const NeighborGraph gx = build_neighbor_graph(x);
    const double base = psi_hat(contingency(y, gx)).value;
    if (base >= 1.0 - 1e-9) {
        throw std::domain_error("psi_conditional_hat: psihat(X,Y) is 1, denominator collapses");
    }
    const double joint = psi_of_product({&x, &z}, y);
    return (joint - base) / (1.0 - base);
}

SelectionTrace select_variables(const std::vector<PointCloud>& columns, const LabelVector& y,
                                int max_steps) {
    const int p = static_cast<int>(columns.size());
    if (p < 1) throw std::invalid_argument("select_variables: no covariate columns");
    const int n = static_cast<int>(y.codes.size());
    for (const PointCloud& c : columns) {
        if (c.size() != n) throw std::invalid_argument("select_variables: column sizes differ");
    }
    if (n < 2) throw std::invalid_argument("select_variables: need at least 2 observations");
    if (max_steps < 0 || max_steps > p) max_steps = p;

    SelectionTrace trace;
    std::vector<bool> used(p, false);

    // first step: unconditional psihat
    std::vector<double> first(p);
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < p; ++j) {
        const NeighborGraph g = build_neighbor_graph(columns[j]);
        first[j] = psi_hat(contingency(y, g)).value;
    }
    int best = 0;
    for (int j = 1; j < p; ++j) {
        if (first[j] > first[best]) best = j;
    }
    trace.chosen.push_back(best);
    trace.scores.push_back(first[best]);
    used[best] = true;
    if (first[best] <= 0.0) {
        trace.stopped_because = SelectionTrace::Stop::NonpositiveScore;
        return trace;
    }
    if (max_steps == 1) {
        trace.stopped_because = SelectionTrace::Stop::MaxSteps;
        return trace;
    }

    double chosen_psi = first[best];
    std::vector<const PointCloud*> chosen_parts{&columns[best]};

    while (static_cast<int>(trace.chosen.size()) < max_steps) {
        if (1.0 - chosen_psi <= 1e-9) {
            trace.warnings.push_back(
                "psihat of the chosen set reached 1; conditional scores undefined");
            trace.stopped_because = SelectionTrace::Stop::Exhausted;
            return trace;
        }
        std::vector<int> candidates;
        for (int j = 0; j < p; ++j) {
            if (!used[j]) candidates.push_back(j);
        }
        if (candidates.empty()) {
            trace.stopped_because = SelectionTrace::Stop::Exhausted;
            return trace;
        }
        std::vector<double> cond(candidates.size());
        std::vector<double> joint_psi(candidates.size());
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < static_cast<int>(candidates.size()); ++t) {
            std::vector<const PointCloud*> parts = chosen_parts;
            parts.push_back(&columns[candidates[t]]);
            joint_psi[t] = psi_of_product(parts, y);
            cond[t] = (joint_psi[t] - chosen_psi) / (1.0 - chosen_psi);
        }
        int arg = 0;
        for (int t = 1; t < static_cast<int>(candidates.size()); ++t) {
            if (cond[t] > cond[arg]) arg = t;
        }
        if (cond[arg] <= 0.0) {
            trace.stopped_because = SelectionTrace::Stop::NonpositiveScore;
            return trace;
        }
        const int pick = candidates[arg];
        trace.chosen.push_back(pick);
        trace.scores.push_back(cond[arg]);
        used[pick] = true;
        chosen_parts.push_back(&columns[pick]);
        chosen_psi = joint_psi[arg];
    }
    trace.stopped_because = SelectionTrace::Stop::MaxSteps;
    return trace;
}

} // namespace nnpsi
