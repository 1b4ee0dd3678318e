#include "puropt/solve.hpp"

#include <algorithm>

namespace puropt {

SolveResult solve(const Vec& q, double t, SolverKind kind, bool exact_purity) {
  if (kind == SolverKind::Dual) {
    return solve_dual(q, t, exact_purity);
  }
  SolveResult result =
      kind == SolverKind::Recursive ? solve_recursive(q, t) : oracle_solve(q, t);
  if (exact_purity) {
    // Valid on any optimizer: when its purity is slack the ball constraint
    // is inactive, so blending toward an argmax vertex preserves the value.
    const Vec qp = normalize_objective(q).q;
    blend_to_exact_purity(result.optimizer, qp, std::min(clamp_purity(q.size(), t), 1.0));
  }
  return result;
}

}  // namespace puropt
