#include "puropt/operator_reduction.hpp"

#include <algorithm>
#include <cmath>

#include "puropt/solve.hpp"

namespace puropt {

double max_abs_entry(const CMat& m) {
  return m.cwiseAbs().maxCoeff();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

namespace {

void require_square_finite(const CMat& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionMismatchError(std::string(what) + " must be square and nonempty");
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

HermitianOperator::HermitianOperator(CMat m) {
  require_square_finite(m, "operator");
  const double dev = max_abs_entry(m - m.adjoint());
  if (dev > herm_tolerance(m.rows())) {
    throw NonHermitianInputError("operator deviates from Hermitian by " + std::to_string(dev));
  }
  mat_ = 0.5 * (m + m.adjoint());
}

EigenSystem eigendecompose(const HermitianOperator& h) {
  const Eigen::Index d = h.dim();
  Eigen::SelfAdjointEigenSolver<CMat> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw ValidationError("eigendecomposition failed to converge");
  }
  EigenSystem sys;
  sys.U.resize(d, d);
  sys.eigenvalues.resize(static_cast<std::size_t>(d));
  // Eigen sorts ascending; flip to descending.
  for (Eigen::Index k = 0; k < d; ++k) {
    sys.eigenvalues[static_cast<std::size_t>(k)] = es.eigenvalues()(d - 1 - k);
    sys.U.col(k) = es.eigenvectors().col(d - 1 - k);
  }
  const double scale = 1.0 + max_abs_entry(h.matrix());
  CMat diag = CMat::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) diag(k, k) = sys.eigenvalues[static_cast<std::size_t>(k)];
  if (max_abs_entry(sys.U * diag * sys.U.adjoint() - h.matrix()) > herm_tolerance(d) * scale ||
      max_abs_entry(sys.U.adjoint() * sys.U - CMat::Identity(d, d)) > herm_tolerance(d)) {
    throw ValidationError("eigendecomposition residual above tolerance");
  }
  return sys;
}

DensityOperator DensityOperator::from_matrix(CMat rho) {
  HermitianOperator h(std::move(rho));
  const Eigen::Index d = h.dim();
  EigenSystem sys = eigendecompose(h);
  double trace = 0.0;
  double purity = 0.0;
  for (double ev : sys.eigenvalues) {
    if (ev < -kFeasEps) {
      throw ValidationError("density operator has eigenvalue " + std::to_string(ev));
    }
    trace += ev;
    purity += ev * ev;
  }
  if (std::fabs(trace - 1.0) > kFeasEps) {
    throw ValidationError("density operator trace deviates from one");
  }
  if (purity < 1.0 / static_cast<double>(d) - kFeasEps || purity > 1.0 + kFeasEps) {
    throw ValidationError("density operator purity out of range");
  }
  return DensityOperator(h.matrix());
}

double DensityOperator::purity() const {
  return (mat_ * mat_).trace().real();
}

ExpectationResult max_expectation(const HermitianOperator& h, double t, SolverKind solver,
                                  bool exact_purity) {
  const Eigen::Index d = h.dim();
  EigenSystem sys = eigendecompose(h);
  SolveResult r = solve(sys.eigenvalues, t, solver, exact_purity);

  CMat sigma = CMat::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    sigma(k, k) = std::max(r.optimizer[static_cast<std::size_t>(k)], 0.0);
  }
  CMat rho = sys.U * sigma * sys.U.adjoint();

  const double scale = 1.0 + max_abs_entry(h.matrix());
  const double recomputed = (rho * h.matrix()).trace().real();
  if (std::fabs(recomputed - r.optimum) > kNumEps * scale * static_cast<double>(d)) {
    throw InternalKKTViolationError("round trip Tr(rho H) deviates from the vector optimum");
  }
  return ExpectationResult{r.optimum, DensityOperator::from_matrix(std::move(rho))};
}

ExpectationResult min_energy(const HermitianOperator& h, double t, SolverKind solver) {
  ExpectationResult r = max_expectation(HermitianOperator(-h.matrix()), t, solver);
  return ExpectationResult{-r.value, std::move(r.rho)};
}

double max_fidelity_pure(const DensityOperator& psi, double t) {
  HermitianOperator h(psi.matrix());
  EigenSystem sys = eigendecompose(h);
  if (sys.eigenvalues.size() > 1 && sys.eigenvalues[1] > kFeasEps) {
    throw NotPureTargetError("target state is not rank one");
  }
  return max_expectation(h, t).value;
}

}  // namespace puropt
