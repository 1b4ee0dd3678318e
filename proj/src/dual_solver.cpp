#include "puropt/dual_solver.hpp"

#include <algorithm>
#include <cmath>

#include "puropt/kernels.hpp"

namespace puropt {

using kernels::vargmax;
using kernels::vdot;
using kernels::vmax;
using kernels::vmin;
using kernels::vrelu_scale;
using kernels::vrelu_sum;
using kernels::vrelu_sumsq;
using kernels::vsum;

double dual_h(double z, const Vec& qp, double t) {
  if (z >= vmax(qp)) return z;
  return std::sqrt(t) * std::sqrt(vrelu_sumsq(qp, z)) + z;
}

double dual_h_derivative(double z, const Vec& qp, double t) {
  if (z >= vmax(qp)) return 1.0;
  const double l2 = std::sqrt(vrelu_sumsq(qp, z));
  const double l1 = vrelu_sum(qp, z);
  return 1.0 - std::sqrt(t) * l1 / l2;
}

std::pair<double, double> z_interval(const Vec& qp, double t) {
  const std::size_t n = qp.size();
  const double nd = static_cast<double>(n);
  if (!(t > 1.0 / nd) || !(t < 1.0)) {
    throw ValidationError("z_interval requires 1/n < t < 1");
  }
  const double q_max = vmax(qp);
  const double q_min = vmin(qp);
  // ||q' - min(q') 1||_1 in one pass; every term is nonnegative.
  const double l1_dev = vrelu_sum(qp, q_min);
  const double c = (1.0 - std::sqrt(t)) * l1_dev / (std::sqrt(nd) * (std::sqrt(nd * t) - 1.0));
  const double s = c + 1.0;  // any strict excess over the bound works
  return {q_min - 2.0 * s, q_max};
}

namespace {

// Closed-form stationary point of h on the support identified by golden
// section. Value-only search cannot localize a flat minimum below
// sqrt(machine eps) in z, which is too coarse for the KKT reconstruction;
// the water level on a fixed active set solves a quadratic exactly.
double polish_z(const Vec& qp, double t, double z_guess, double z_lo, double z_hi) {
  double s1 = 0.0;
  double lb = z_lo, ub = z_hi;
  std::size_t k = 0;
  for (double q : qp) {
    if (q > z_guess) {
      s1 += q;
      ++k;
      if (q < ub) ub = q;
    } else if (q > lb) {
      lb = q;
    }
  }
  if (k == 0) return z_guess;
  const double kd = static_cast<double>(k);
  if (t * kd - 1.0 < 1e-14) return z_guess;  // no stationary point on this piece
  const double mean = s1 / kd;
  // Centered second moment keeps the root cancellation-free:
  // z = mean - sqrt(ss / (k (tk - 1))).
  double ss = 0.0;
  for (double q : qp) {
    if (q > z_guess) ss += (q - mean) * (q - mean);
  }
  const double root = mean - std::sqrt(ss / (kd * (t * kd - 1.0)));
  return std::clamp(root, lb, ub);
}

double h_slope(const Vec& qp, double t, double z) {
  const double l2sq = vrelu_sumsq(qp, z);
  if (l2sq <= 0.0) return 1.0;
  return 1.0 - std::sqrt(t) * vrelu_sum(qp, z) / std::sqrt(l2sq);
}

}  // namespace

DualState minimize_h(const Vec& qp, double t) {
  DualState state;
  auto [a, b] = z_interval(qp, t);
  state.z_min = a;
  state.z_max = b;

  const double q_max = b;
  const double sqrt_t = std::sqrt(t);
  auto h = [&](double z) {
    ++state.evaluations;
    if (z >= q_max) return z;
    return sqrt_t * std::sqrt(vrelu_sumsq(qp, z)) + z;
  };

  constexpr double inv_phi = 0.6180339887498949;
  const double tol = kZTolRel * (1.0 + (b - a));
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = h(x1);
  double f2 = h(x2);
  while (b - a > tol && state.iterations < kGoldenMaxIter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = h(x2);
    }
    ++state.iterations;
  }
  state.z_star = 0.5 * (a + b);
  if (state.z_star < q_max) {
    // Accept the algebraic root only when it lands on a genuine interior
    // stationary point; boundary minima keep the golden-section bracket.
    const double polished = polish_z(qp, t, state.z_star, state.z_min, state.z_max);
    const double slope_polished = std::fabs(h_slope(qp, t, polished));
    if (slope_polished <= 1e-8 && slope_polished < std::fabs(h_slope(qp, t, state.z_star))) {
      state.z_star = polished;
    }
  }
  state.h_star = h(state.z_star);
  return state;
}

Vec reconstruct_primal(const DualState& state, const Vec& qp, double t) {
  const std::size_t n = qp.size();
  Vec p(n);
  const double v_norm_sq = vrelu_sumsq(qp, state.z_star);
  // Boundary minimum (h' < 0 up to z_max) or vanished v(z*): the optimizer
  // is uniform over the argmax set of q'. Interior stationary points take
  // the water-filling form below.
  const double slope = v_norm_sq > 0.0
                           ? 1.0 - std::sqrt(t) * vrelu_sum(qp, state.z_star) /
                                       std::sqrt(v_norm_sq)
                           : 1.0;
  if (v_norm_sq <= 0.0 || std::sqrt(v_norm_sq) <= kDegenerateVNorm ||
      slope <= -kFeasEps) {
    const double q_max = vmax(qp);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (qp[i] >= q_max - kFeasEps) ++count;
    }
    if (1.0 / static_cast<double>(count) > t + kFeasEps) {
      throw InternalKKTViolationError("degenerate reconstruction needs 1/|S| <= t");
    }
    const double w = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = qp[i] >= q_max - kFeasEps ? w : 0.0;
    }
  } else {
    vrelu_scale(p, qp, state.z_star, std::sqrt(t / v_norm_sq));
  }
  if (!check_feasible(p, t, 10.0 * kFeasEps)) {
    throw InternalKKTViolationError("reconstructed primal fails feasibility; z* not converged");
  }
  return p;
}

void blend_to_exact_purity(Vec& p, const Vec& qp, double target) {
  const double purity = vdot(p, p);
  if (purity >= target - kFeasEps) return;

  const double q_max = vmax(qp);
  std::size_t vertex = 0;
  for (std::size_t i = 0; i < qp.size(); ++i) {
    if (qp[i] >= q_max - kFeasEps) {
      vertex = i;
      break;
    }
  }

  // a(delta) = ||(1-delta) p + delta e||^2 - target is a convex quadratic
  // with a(0) < 0 and a(1) = 1 - target >= 0: take its root in (0, 1].
  const double pe = p[vertex];
  const double qa = purity - 2.0 * pe + 1.0;
  const double qb = 2.0 * (pe - purity);
  const double qc = purity - target;
  double delta = -1.0;
  if (qa > 0.0) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) delta = (-qb + std::sqrt(disc)) / (2.0 * qa);
  }
  if (!(delta > 0.0 && delta <= 1.0 + kNumEps)) {
    // Bisection fallback on the same bracket.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double a_mid = (qa * mid + qb) * mid + qc;
      (a_mid < 0.0 ? lo : hi) = mid;
    }
    delta = 0.5 * (lo + hi);
  }
  delta = std::min(delta, 1.0);
  for (double& x : p) x *= (1.0 - delta);
  p[vertex] += delta;
}

SolveResult solve_dual(const Vec& q, double t, bool exact_purity) {
  const std::size_t n = q.size();
  NormalizedObjective norm = normalize_objective(q);
  const Vec& qp = norm.q;

  SolveResult result;
  result.regime = classify_regime_normalized(n, t, qp);

  const double inv_n = 1.0 / static_cast<double>(n);
  const double tc = clamp_purity(n, t);
  double optimum_qp = 0.0;
  if (tc >= 1.0) {
    const std::size_t i = vargmax(qp);
    result.optimizer.assign(n, 0.0);
    result.optimizer[i] = 1.0;
    optimum_qp = qp[i];
  } else if (tc < inv_n) {
    throw InfeasibleError(t, inv_n);
  } else if (tc == inv_n) {
    result.optimizer.assign(n, inv_n);
    optimum_qp = vsum(qp) * inv_n;
  } else {
    DualState state = minimize_h(qp, tc);
    result.optimizer = reconstruct_primal(state, qp, tc);
    optimum_qp = state.h_star;
    result.stats.iterations = state.iterations;
    result.stats.scalar_evals = state.evaluations;
  }

  if (exact_purity) {
    blend_to_exact_purity(result.optimizer, qp, std::min(tc, 1.0));
  }
  result.optimum = optimum_qp - norm.shift;
  return result;
}

}  // namespace puropt
