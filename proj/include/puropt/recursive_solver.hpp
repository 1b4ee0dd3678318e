#pragma once

#include "puropt/types.hpp"

namespace puropt {

// Dimension-reducing solver: handles the algebraic regimes directly,
// otherwise pins one optimizer coordinate to zero (the face-push index) and
// continues on the remaining coordinates. Implemented as an explicit loop
// over shrinking vectors, so the depth is bounded by n - 2 without touching
// the call stack. Runs in O(n^2).
SolveResult solve_recursive(const Vec& q, double t);

}  // namespace puropt
