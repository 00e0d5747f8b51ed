#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nnpsi/neighbor_graph.hpp"

namespace nnpsi {

/// Categorical response with codes 1..K. Raw labels are recoded by first
/// appearance, which makes every downstream statistic exactly invariant
/// under bijective relabeling: a permuted label vector recodes to the
/// identical code sequence.
struct LabelVector {
    std::vector<int> codes;  // values in 1..K
    int K = 0;
    std::vector<std::string> level_names;  // original labels, indexed by code-1

    static LabelVector from_strings(const std::vector<std::string>& raw);
    static LabelVector from_ints(const std::vector<int>& raw);
    static LabelVector from_codes(std::vector<int> codes);  // validates codes are exactly 1..K
};

/// Empirical joint of (Y_i, Y_{N(i)}) with marginals; joint sums to one and
/// n * joint[k][l] is an integer count.
struct ContingencyCounts {
    Eigen::MatrixXd joint;  // K x K, entry (k,l) = phat_{k+1,l+1}
    Eigen::VectorXd row;    // phat_k
    Eigen::VectorXd col;    // qhat_l
    int n = 0;
    int K = 0;
};

ContingencyCounts contingency(const LabelVector& y, const NeighborGraph& g);

/// Result of a coefficient evaluation. K_used can be smaller than the input
/// K when unobserved or neighborless levels had to be dropped.
struct PsiResult {
    double value = 0.0;
    int K_used = 0;
    bool dropped_levels = false;
};

/// The sample dependence coefficient
///   psihat = 1/(K-1) sum_{k,l} (phat_{k,l} - phat_k qhat_l)^2 / (phat_k qhat_l).
/// Levels with zero row or column mass are dropped (iterating until all
/// retained marginals are positive) and the retained table renormalized.
/// Throws if fewer than two levels remain.
PsiResult psi_hat(const ContingencyCounts& c);

enum class MatrixNorm { WeightedFrobenius, WeightedTrace };
enum class GammaMap { Square, Identity };

/// Alternative-norm coefficient gamma(||Var(Q(X))|| / ||Var(Q(Y))||) with the
/// norm weighted by D = diag(phat). The Var(Q(X)) plug-in symmetrizes the
/// joint; the denominator uses the closed forms ||.||_{F,D} = sqrt(K-1) and
/// ||.||_{tr,D} = K-1. WeightedFrobenius with Square recovers psi_hat on
/// symmetric tables.
PsiResult psi_hat_norm(const ContingencyCounts& c, MatrixNorm norm, GammaMap gamma);

// Shared helper: indices of levels that survive the iterated removal of
// zero-mass rows/columns, plus the renormalized subtable.
struct ReducedTable {
    Eigen::MatrixXd joint;
    Eigen::VectorXd row, col;
    std::vector<int> kept;  // original level indices (0-based)
    bool dropped = false;
};
ReducedTable drop_empty_levels(const ContingencyCounts& c);

} // namespace nnpsi
