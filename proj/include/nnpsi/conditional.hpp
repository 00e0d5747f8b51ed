#pragma once

#include <string>
#include <vector>

#include "nnpsi/contingency.hpp"
#include "nnpsi/point_cloud.hpp"

namespace nnpsi {

/// Plug-in conditional coefficient
///   (psihat((X,Z),Y) - psihat(X,Y)) / (1 - psihat(X,Y)),
/// with (X,Z) living in the product metric. Can be negative in finite
/// samples; reported raw. Throws when psihat(X,Y) is within 1e-9 of 1.
double psi_conditional_hat(const PointCloud& x, const PointCloud& z, const LabelVector& y);

struct SelectionTrace {
    std::vector<int> chosen;      // 0-based column indices, in selection order
    std::vector<double> scores;   // psihat for step 1, conditional psihat afterwards
    enum class Stop { NonpositiveScore, Exhausted, MaxSteps } stopped_because =
        Stop::Exhausted;
    std::vector<std::string> warnings;
};

/// Greedy model-free variable selection: the first pick maximizes psihat,
/// later picks maximize the conditional coefficient given the variables
/// chosen so far (product metric over the chosen columns). Selection stops
/// once the best available conditional score is nonpositive; that candidate
/// is not added. A first-step maximum of exactly zero is recorded and then
/// the trace ends. Ties go to the smallest column index. max_steps < 0
/// means no limit beyond the number of columns.
SelectionTrace select_variables(const std::vector<PointCloud>& columns, const LabelVector& y,
                                int max_steps = -1);

} // namespace nnpsi
