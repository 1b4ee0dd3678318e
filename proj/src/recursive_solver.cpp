#include "puropt/recursive_solver.hpp"

#include <cmath>
#include <numeric>

#include "puropt/kernels.hpp"
#include "puropt/simplex_core.hpp"

namespace puropt {

using kernels::vdot;
using kernels::vmin;

SolveResult solve_recursive(const Vec& q, double t) {
  const std::size_t n0 = q.size();
  NormalizedObjective norm = normalize_objective(q);
  const Regime top_regime = classify_regime_normalized(n0, t, norm.q);

  Vec cur = std::move(norm.q);
  std::vector<std::size_t> live(n0);  // current coordinate -> original coordinate
  std::iota(live.begin(), live.end(), 0);

  SolveStats stats;
  Vec p_local;

  for (;;) {
    const std::size_t n = cur.size();
    const double tc = clamp_purity(n, t);
    const Regime regime = classify_regime_normalized(n, tc, cur);
    if (auto special = solve_special(regime, cur, tc)) {
      p_local = std::move(special->optimizer);
      break;
    }

    Vec p_bar = push_to_ball_boundary(cur, tc);
    if (tc <= 1.0 / static_cast<double>(n - 1) || vmin(p_bar) >= -kFeasEps) {
      p_local = clip_to_simplex(p_bar);
      break;
    }

    FacePush face = push_to_simplex_face(cur);
    if (face.q_bar_dot >= tc) {
      p_local = clip_to_simplex(p_bar);
      break;
    }

    // The optimizer vanishes at the face coordinate; drop it and continue on
    // the renormalized remainder.
    stats.removed_indices.push_back(live[face.index]);
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(face.index));
    face.q_bar.erase(face.q_bar.begin() + static_cast<std::ptrdiff_t>(face.index));
    cur = normalize_objective(face.q_bar).q;
    ++stats.recursion_depth;
  }

  SolveResult result;
  result.optimizer.assign(n0, 0.0);
  for (std::size_t j = 0; j < live.size(); ++j) {
    result.optimizer[live[j]] = p_local[j];
  }
  result.optimum = vdot(result.optimizer, q);
  result.regime = top_regime;
  stats.iterations = stats.recursion_depth;
  result.stats = std::move(stats);
  return result;
}

}  // namespace puropt
