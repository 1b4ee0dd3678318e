#pragma once

#include <Eigen/Dense>

#include "puropt/errors.hpp"
#include "puropt/types.hpp"

namespace puropt {

using CMat = Eigen::MatrixXcd;

// Hermiticity / eigendecomposition tolerance, scaled with dimension.
inline double herm_tolerance(Eigen::Index d) { return 1e-8 * static_cast<double>(d); }

double max_abs_entry(const CMat& m);

CMat kron(const CMat& a, const CMat& b);

// d x d Hermitian matrix; symmetrized on construction, inputs further than
// herm_tolerance(d) from their adjoint are rejected.
class HermitianOperator {
public:
  explicit HermitianOperator(CMat m);
  const CMat& matrix() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

private:
  CMat mat_;
};

// Eigenvalues in descending order, U columns matched to them.
struct EigenSystem {
  CMat U;
  Vec eigenvalues;
};

EigenSystem eigendecompose(const HermitianOperator& h);

// PSD, unit-trace matrix; validated on construction.
class DensityOperator {
public:
  static DensityOperator from_matrix(CMat rho);
  const CMat& matrix() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }
  double purity() const;

private:
  explicit DensityOperator(CMat m) : mat_(std::move(m)) {}
  CMat mat_;
};

struct ExpectationResult {
  double value;
  DensityOperator rho;
};

// max Tr(rho H) over density operators with Tr(rho^2) <= t, by reducing to
// the eigenvalue vector of H (the diagonal of sigma = U† rho U can be taken
// without loss) and mapping the vector optimizer back as rho = U diag(p) U†.
ExpectationResult max_expectation(const HermitianOperator& h, double t,
                                  SolverKind solver = SolverKind::Dual,
                                  bool exact_purity = false);

// min Tr(rho H) = -max Tr(rho (-H)).
ExpectationResult min_energy(const HermitianOperator& h, double t,
                             SolverKind solver = SolverKind::Dual);

// max F(rho, psi) over Tr(rho^2) <= t for a rank-1 target projector psi;
// equals (1 + sqrt((dt-1)(d-1)))/d.
double max_fidelity_pure(const DensityOperator& psi, double t);

}  // namespace puropt
