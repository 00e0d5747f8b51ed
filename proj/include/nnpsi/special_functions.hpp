#pragma once

namespace nnpsi {

// Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, Lentz continued fraction otherwise;
// relative accuracy around 1e-14 for the argument ranges used here.
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

} // namespace nnpsi
