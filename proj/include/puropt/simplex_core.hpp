#pragma once

#include <cstddef>
#include <optional>

#include "puropt/errors.hpp"
#include "puropt/types.hpp"

namespace puropt {

// Upper bound t on p.p together with the ambient dimension n.
struct PurityBudget {
  double t;
  std::size_t n;

  double floor() const { return 1.0 / static_cast<double>(n); }
  bool feasible() const { return t >= floor() - kFeasEps; }
  // delta_t = sqrt(t - 1/n), radius of the centered ball slice.
  double delta() const;
  // Budgets within kFeasEps of 1/n collapse to exactly 1/n.
  double clamped() const;
};

struct NormalizedObjective {
  Vec q;         // q' = q + shift * 1, sums to one
  double shift;  // (1 - sum(q)) / n
};

// Shifts q onto the sum-one plane; the argmax over P(t) is unchanged and the
// caller recovers the original optimum as optimum' - shift.
NormalizedObjective normalize_objective(const Vec& q);

double clamp_purity(std::size_t n, double t);

Regime classify_regime(std::size_t n, double t, const Vec& q);
// Variant for callers that already hold a normalized objective.
Regime classify_regime_normalized(std::size_t n, double t, const Vec& qp);

// p_bar = 1/n + delta_t (q' - 1/n)/kappa with kappa^2 = q'.q' - 1/n.
// Lands on the ball boundary (p.p = t) and the sum-one plane; entries may be
// negative, the caller checks.
Vec push_to_ball_boundary(const Vec& qp, double t);

struct FacePush {
  Vec q_bar;           // q' pushed along its deviation until the minimum entry is 0
  std::size_t index;   // coordinate pinned to zero (lowest index on ties)
  double q_bar_dot;    // q_bar.q_bar = delta^2 kappa^2 + 1/n
};

FacePush push_to_simplex_face(const Vec& qp);

// Closed-form solutions for every regime except General. Works on the
// normalized objective; optimum is reported with respect to q'.
std::optional<SolveResult> solve_special(Regime regime, const Vec& qp, double t);

bool check_feasible(const Vec& p, double t, double eps = kFeasEps);

// Independent verification oracle. Sweeps every top-k support of q and takes
// the best affine candidate p = 1/k + c (q - mean_k) with c capped by the
// ball and nonnegativity; for n <= 16 it additionally cross-checks against
// 10,000 random feasible samples. Exact, but O(n log n) with a large
// constant: a test fixture, not a production path.
SolveResult oracle_solve(const Vec& q, double t);

inline constexpr std::size_t kOracleDimCap = 4096;
inline constexpr std::size_t kOracleSamplingCap = 16;

// (1 + sqrt((nt-1)(n-1))) / n, the optimum for q = e(i).
double basis_vector_optimum(std::size_t n, double t);

// Clip entries in [-eps, 0) to zero and rescale to unit sum.
Vec clip_to_simplex(const Vec& p, double eps = kFeasEps);

}  // namespace puropt
