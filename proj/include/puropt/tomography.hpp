#pragma once

#include <vector>

#include "puropt/operator_reduction.hpp"
#include "puropt/types.hpp"

namespace puropt {

struct MeasurementBasis {
  std::vector<CMat> elements;
  std::vector<CMat> duals;  // <duals[i], elements[j]> = delta_ij (Frobenius)
  double gram_condition = 1.0;
};

// Dual basis by Gram-matrix inversion over the real span of the elements.
// Rejects sets whose Gram condition number exceeds 1e12.
MeasurementBasis dual_basis(std::vector<CMat> elements);

// H = sum_i p_hat_i Lambda_i^D. Unit trace when the frequencies are
// consistent, but in general not positive semi-definite.
HermitianOperator linear_inversion(const Vec& frequencies, const MeasurementBasis& basis);

struct MleResult {
  DensityOperator rho;
  double distance;  // ||rho - H||_2
  double purity;
  double scan_k;    // purity at which the outer scan settled
};

// Frobenius-nearest density operator to H with Tr(rho^2) <= t. Outer scan
// over the exact purity k in [1/d, min(t, 1)] of the equality-constrained
// inner problem, 64-point grid plus golden-section refinement.
MleResult mle_purity_leq(const HermitianOperator& h, double t);

// Frobenius-nearest density operator with Tr(rho^2) = t exactly. Non-convex
// constraint, but on it ||rho - H||^2 = t + Tr(H^2) - 2 Tr(rho H), so the
// exact-purity expectation maximizer solves it.
MleResult mle_purity_eq(const HermitianOperator& h, double t);

// Plain MLE: projection onto the density operators (t = 1).
MleResult mle_plain(const HermitianOperator& h);

// Orthonormal Hermitian bases for tests and as documented defaults.
std::vector<CMat> pauli_basis(int n_qubits);
std::vector<CMat> hermitian_elementary_basis(int d);

}  // namespace puropt
