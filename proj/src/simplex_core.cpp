#include "puropt/simplex_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "puropt/kernels.hpp"

namespace puropt {

using kernels::vaffine;
using kernels::vargmax;
using kernels::vargmin;
using kernels::vdot;
using kernels::vmax;
using kernels::vmax_abs_dev;
using kernels::vmin;
using kernels::vsum;

const char* to_string(Regime r) {
  switch (r) {
    case Regime::FullSimplex: return "full_simplex";
    case Regime::Infeasible: return "infeasible";
    case Regime::Singleton: return "singleton";
    case Regime::TwoDim: return "two_dim";
    case Regime::UniformObjective: return "uniform_objective";
    case Regime::BallEqualsSimplexSlice: return "ball_slice";
    case Regime::General: return "general";
  }
  return "unknown";
}

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::Dual: return "dual";
    case SolverKind::Recursive: return "recursive";
    case SolverKind::Oracle: return "oracle";
  }
  return "unknown";
}

std::optional<SolverKind> solver_from_string(std::string_view name) {
  if (name == "dual") return SolverKind::Dual;
  if (name == "recursive") return SolverKind::Recursive;
  if (name == "oracle") return SolverKind::Oracle;
  return std::nullopt;
}

double PurityBudget::delta() const {
  return std::sqrt(std::max(0.0, t - floor()));
}

double PurityBudget::clamped() const {
  return std::fabs(t - floor()) <= kFeasEps ? floor() : t;
}

namespace {

void require_finite(const Vec& q) {
  for (double x : q) {
    if (!std::isfinite(x)) throw ValidationError("objective entries must be finite");
  }
  if (q.empty()) throw ValidationError("objective must have length >= 1");
}

}  // namespace

NormalizedObjective normalize_objective(const Vec& q) {
  require_finite(q);
  const double s = vsum(q);
  const double shift = (1.0 - s) / static_cast<double>(q.size());
  NormalizedObjective out;
  out.q.resize(q.size());
  vaffine(out.q, q, 1.0, shift);
  out.shift = shift;
  return out;
}

double clamp_purity(std::size_t n, double t) {
  return PurityBudget{t, n}.clamped();
}

Regime classify_regime_normalized(std::size_t n, double t, const Vec& qp) {
  const double inv_n = 1.0 / static_cast<double>(n);
  if (t >= 1.0) return Regime::FullSimplex;
  const double tc = clamp_purity(n, t);
  if (tc < inv_n) return Regime::Infeasible;
  if (tc == inv_n) return Regime::Singleton;
  if (n == 2) return Regime::TwoDim;
  if (vmax_abs_dev(qp, inv_n) <= kFeasEps) return Regime::UniformObjective;
  if (tc <= 1.0 / static_cast<double>(n - 1)) return Regime::BallEqualsSimplexSlice;
  return Regime::General;
}

Regime classify_regime(std::size_t n, double t, const Vec& q) {
  if (q.size() != n) throw DimensionMismatchError("objective length does not match n");
  if (t >= 1.0) return Regime::FullSimplex;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double tc = clamp_purity(n, t);
  if (tc < inv_n) return Regime::Infeasible;
  if (tc == inv_n) return Regime::Singleton;
  if (n == 2) return Regime::TwoDim;
  return classify_regime_normalized(n, tc, normalize_objective(q).q);
}

Vec push_to_ball_boundary(const Vec& qp, double t) {
  const std::size_t n = qp.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double kappa_sq = vdot(qp, qp) - inv_n;
  if (!(kappa_sq > 1e-300)) throw UniformObjectiveError();
  const double kappa = std::sqrt(kappa_sq);
  const double delta_t = PurityBudget{t, n}.delta();
  const double a = delta_t / kappa;
  Vec p(n);
  vaffine(p, qp, a, (1.0 - a) * inv_n);
  return p;
}

FacePush push_to_simplex_face(const Vec& qp) {
  const std::size_t n = qp.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t i = vargmin(qp);
  const double q_min = qp[i];
  const double denom = 1.0 - static_cast<double>(n) * q_min;
  if (denom <= kNumEps) throw UniformObjectiveError();
  const double delta = 1.0 / denom;
  FacePush out;
  out.q_bar.resize(n);
  vaffine(out.q_bar, qp, delta, (1.0 - delta) * inv_n);
  out.q_bar[i] = 0.0;
  out.index = i;
  const double kappa_sq = std::max(0.0, vdot(qp, qp) - inv_n);
  out.q_bar_dot = delta * delta * kappa_sq + inv_n;
  return out;
}

Vec clip_to_simplex(const Vec& p, double eps) {
  Vec out = p;
  for (double& x : out) {
    if (x < 0.0) {
      if (x < -eps) {
        throw InternalKKTViolationError("candidate has an entry below -eps; cannot clip");
      }
      x = 0.0;
    }
  }
  const double s = vsum(out);
  if (s <= 0.0) throw InternalKKTViolationError("candidate sums to zero after clipping");
  for (double& x : out) x /= s;
  return out;
}

std::optional<SolveResult> solve_special(Regime regime, const Vec& qp, double t) {
  const std::size_t n = qp.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  SolveResult result;
  result.regime = regime;
  switch (regime) {
    case Regime::FullSimplex: {
      const std::size_t i = vargmax(qp);
      result.optimizer.assign(n, 0.0);
      result.optimizer[i] = 1.0;
      result.optimum = qp[i];
      return result;
    }
    case Regime::Infeasible:
      throw InfeasibleError(t, inv_n);
    case Regime::Singleton:
    case Regime::UniformObjective: {
      result.optimizer.assign(n, inv_n);
      result.optimum = vsum(qp) * inv_n;
      return result;
    }
    case Regime::TwoDim: {
      const double r = std::sqrt(std::max(0.0, 2.0 * clamp_purity(n, t) - 1.0));
      const double sign = qp[0] >= 0.5 ? 1.0 : -1.0;  // sign(0) := +1
      result.optimizer = {0.5 * (1.0 + sign * r), 0.5 * (1.0 - sign * r)};
      result.optimum = vdot(result.optimizer, qp);
      return result;
    }
    case Regime::BallEqualsSimplexSlice: {
      result.optimizer = clip_to_simplex(push_to_ball_boundary(qp, clamp_purity(n, t)));
      result.optimum = vdot(result.optimizer, qp);
      return result;
    }
    case Regime::General:
      return std::nullopt;
  }
  return std::nullopt;
}

bool check_feasible(const Vec& p, double t, double eps) {
  if (p.empty()) return false;
  if (vmin(p) < -eps) return false;
  if (std::fabs(vsum(p) - 1.0) > eps) return false;
  return vdot(p, p) <= t + eps;
}

double basis_vector_optimum(std::size_t n, double t) {
  const double nd = static_cast<double>(n);
  return (1.0 + std::sqrt(std::max(0.0, (nd * t - 1.0) * (nd - 1.0)))) / nd;
}

namespace {

// Feasible sample for the oracle cross-check: flat Dirichlet draw, shrunk
// toward 1/n when it lands outside the ball.
Vec feasible_sample(std::mt19937_64& rng, std::size_t n, double t) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec p(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int attempt = 0; attempt < 8; ++attempt) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double u = unit(rng);
      u = u <= 0.0 ? 1e-300 : u;
      p[i] = -std::log(u);
      s += p[i];
    }
    for (double& x : p) x /= s;
    const double purity = vdot(p, p);
    if (purity <= t) return p;
    if (attempt == 7) {
      const double alpha =
          0.999999 * std::sqrt(std::max(0.0, t - inv_n) / std::max(purity - inv_n, 1e-300));
      for (double& x : p) x = inv_n + alpha * (x - inv_n);
      return p;
    }
  }
  return p;
}

}  // namespace

SolveResult oracle_solve(const Vec& q, double t) {
  require_finite(q);
  const std::size_t n = q.size();
  if (n > kOracleDimCap) {
    throw DimensionTooLargeError("oracle supports n <= 4096");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const double tc = clamp_purity(n, t);
  if (tc < inv_n) throw InfeasibleError(t, inv_n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return q[a] != q[b] ? q[a] > q[b] : a < b;
  });

  std::vector<long double> s1(n + 1, 0.0L), s2(n + 1, 0.0L);
  for (std::size_t k = 0; k < n; ++k) {
    const long double v = q[order[k]];
    s1[k + 1] = s1[k] + v;
    s2[k + 1] = s2[k] + v * v;
  }

  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t best_k = 1;
  double best_c = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double inv_k = 1.0 / static_cast<double>(k);
    if (inv_k > tc + kFeasEps) continue;  // support too small for the budget
    const double mean = static_cast<double>(s1[k]) * inv_k;
    const double ss =
        std::max(0.0, static_cast<double>(s2[k] - s1[k] * s1[k] * static_cast<long double>(inv_k)));
    double c = 0.0;
    double value = mean;
    if (ss > 1e-30) {
      const double c_ball = std::sqrt(std::max(0.0, tc - inv_k) / ss);
      const double q_last = q[order[k - 1]];
      const double c_pos = mean > q_last ? inv_k / (mean - q_last)
                                         : std::numeric_limits<double>::infinity();
      c = std::min(c_ball, c_pos);
      value = mean + c * ss;
    }
    if (value > best_value) {
      best_value = value;
      best_k = k;
      best_c = c;
    }
  }

  SolveResult result;
  result.optimizer.assign(n, 0.0);
  {
    const double inv_k = 1.0 / static_cast<double>(best_k);
    const double mean = static_cast<double>(s1[best_k]) * inv_k;
    for (std::size_t j = 0; j < best_k; ++j) {
      const double v = inv_k + best_c * (q[order[j]] - mean);
      result.optimizer[order[j]] = v < 0.0 ? 0.0 : v;
    }
  }
  result.optimum = best_value;
  result.regime = classify_regime(n, t, q);
  result.stats.iterations = static_cast<int>(n);

  if (n <= kOracleSamplingCap) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (n * 0x100000001b3ULL));
    for (int s = 0; s < 10000; ++s) {
      const Vec sample = feasible_sample(rng, n, tc);
      if (vdot(sample, q) > best_value + kFeasEps) {
        throw InternalKKTViolationError("oracle: random feasible sample beat the sweep optimum");
      }
    }
  }
  return result;
}

}  // namespace puropt
