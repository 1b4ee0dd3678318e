#pragma once

#include <utility>

#include "puropt/simplex_core.hpp"
#include "puropt/types.hpp"

namespace puropt {

struct DualState {
  double z_min = 0.0;
  double z_max = 0.0;
  double z_star = 0.0;
  double h_star = 0.0;
  int evaluations = 0;  // h(z) calls
  int iterations = 0;   // golden-section steps
};

// h(z) = sqrt(t) ||v(z)||_2 + z for z < max(q'), else z, with
// v_i(z) = max(0, q_i - z). Convex in z; its minimum equals the primal
// optimum by strong duality.
double dual_h(double z, const Vec& qp, double t);

// 1 - sqrt(t) ||v(z)||_1 / ||v(z)||_2 below max(q'), 1 above (right
// derivative at the kink).
double dual_h_derivative(double z, const Vec& qp, double t);

// Bracket [z_min, z_max] guaranteed to contain the minimizer:
// z_max = max(q'), z_min = min(q') - 2s with s strictly above the bound
// (1 - sqrt(t)) ||q' - min(q') 1||_1 / (sqrt(n)(sqrt(nt) - 1)).
// Requires 1/n < t < 1 strictly.
std::pair<double, double> z_interval(const Vec& qp, double t);

// Golden-section search until the bracket is below 1e-12 relative width.
DualState minimize_h(const Vec& qp, double t);

// KKT reconstruction: p = sqrt(t) v(z*)/||v(z*)||_2, or the uniform vector
// on the argmax set of q' when v(z*) vanishes.
Vec reconstruct_primal(const DualState& state, const Vec& qp, double t);

// Blend p toward a vertex of its argmax set until p.p = target, leaving
// p.q' unchanged. No-op when the purity is already within kFeasEps.
void blend_to_exact_purity(Vec& p, const Vec& qp, double target);

SolveResult solve_dual(const Vec& q, double t, bool exact_purity = false);

inline constexpr double kZTolRel = 1e-12;   // golden-section relative interval tolerance
inline constexpr int kGoldenMaxIter = 200;
inline constexpr double kDegenerateVNorm = 1e-12;  // ||v(z*)|| threshold for the argmax branch

}  // namespace puropt
