#pragma once

#include "puropt/dual_solver.hpp"
#include "puropt/recursive_solver.hpp"
#include "puropt/simplex_core.hpp"
#include "puropt/types.hpp"

namespace puropt {

// Uniform entry point over the three solvers. exact_purity post-processes
// the optimizer to land exactly on p.p = min(t, 1); the optimum is
// unchanged.
SolveResult solve(const Vec& q, double t, SolverKind kind, bool exact_purity = false);

}  // namespace puropt
