#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace puropt {

using Vec = std::vector<double>;

// Feasibility and tie-breaking tolerance; double precision with n up to ~1e4
// accumulates roughly n ulps of error.
inline constexpr double kFeasEps = 1e-9;
// Tolerance for algebraic identities (sums, dot products, closed forms).
inline constexpr double kNumEps = 1e-10;

// Classification of a (n, t, q) instance. First match wins, in this order.
enum class Regime {
  FullSimplex,             // t >= 1: the ball constraint is inactive
  Infeasible,              // t < 1/n
  Singleton,               // t == 1/n: P(t) = {1/n}
  TwoDim,                  // n == 2 closed form
  UniformObjective,        // q' proportional to 1
  BallEqualsSimplexSlice,  // 1/n < t <= 1/(n-1): P(t) equals the sliced ball
  General,
};

const char* to_string(Regime r);

enum class SolverKind { Dual, Recursive, Oracle };

const char* to_string(SolverKind k);
std::optional<SolverKind> solver_from_string(std::string_view name);

struct SolveStats {
  int iterations = 0;        // golden-section iterations, or oracle sweep length
  int recursion_depth = 0;   // coordinates removed by the recursive solver
  int scalar_evals = 0;      // h(z) evaluations
  std::vector<std::size_t> removed_indices;  // removal order, original coordinates
};

struct SolveResult {
  Vec optimizer;
  double optimum = 0.0;
  Regime regime = Regime::General;
  SolveStats stats;
};

}  // namespace puropt
