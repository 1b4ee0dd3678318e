#include "puropt/tomography.hpp"

#include <cmath>
#include <complex>

#include "puropt/dual_solver.hpp"
#include "puropt/kernels.hpp"

namespace puropt {

namespace {

constexpr double kGramConditionCap = 1e12;
constexpr double kOuterScanTol = 1e-10;
constexpr int kOuterGridPoints = 64;

}  // namespace

MeasurementBasis dual_basis(std::vector<CMat> elements) {
  if (elements.empty()) throw ValidationError("basis must be nonempty");
  const Eigen::Index d = elements.front().rows();
  std::vector<CMat> herm;
  herm.reserve(elements.size());
  for (const CMat& e : elements) {
    if (e.rows() != d || e.cols() != d) {
      throw DimensionMismatchError("basis elements must share one dimension");
    }
    herm.push_back(HermitianOperator(e).matrix());
  }

  const Eigen::Index k = static_cast<Eigen::Index>(herm.size());
  Eigen::MatrixXd gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      gram(i, j) = (herm[static_cast<std::size_t>(i)] * herm[static_cast<std::size_t>(j)])
                       .trace()
                       .real();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) throw SingularBasisError("Gram eigendecomposition failed");
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > kGramConditionCap) {
    throw SingularBasisError("basis Gram matrix condition exceeds 1e12");
  }
  Eigen::MatrixXd gram_inv =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();

  MeasurementBasis out;
  out.gram_condition = hi / lo;
  out.duals.reserve(herm.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    CMat dual = CMat::Zero(d, d);
    for (Eigen::Index j = 0; j < k; ++j) {
      dual += gram_inv(j, i) * herm[static_cast<std::size_t>(j)];
    }
    out.duals.push_back(std::move(dual));
  }
  out.elements = std::move(herm);
  return out;
}

HermitianOperator linear_inversion(const Vec& frequencies, const MeasurementBasis& basis) {
  if (frequencies.size() != basis.duals.size()) {
    throw DimensionMismatchError("frequency count must match the basis size");
  }
  const Eigen::Index d = basis.elements.front().rows();
  CMat h = CMat::Zero(d, d);
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!std::isfinite(frequencies[i])) throw ValidationError("frequencies must be finite");
    h += frequencies[i] * basis.duals[i];
  }
  return HermitianOperator(std::move(h));
}

namespace {

struct ScanPoint {
  double k = 0.0;
  double objective = 0.0;  // ||p - q||^2 with p.p = k
  Vec p;
};

// Inner equality-constrained problem at purity k, via the exact-purity dual
// solve: min ||p - q||^2 over p.p = k equals k + q.q - 2 max p.q.
ScanPoint eval_scan(const Vec& q, double qq, double k) {
  ScanPoint pt;
  pt.k = k;
  SolveResult r = solve_dual(q, k, /*exact_purity=*/true);
  pt.objective = k + qq - 2.0 * r.optimum;
  pt.p = std::move(r.optimizer);
  return pt;
}

MleResult finish(const EigenSystem& sys, const Vec& q, const ScanPoint& best) {
  const Eigen::Index d = sys.U.rows();
  CMat sigma = CMat::Zero(d, d);
  double dist_sq = 0.0;
  double purity = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double v = std::max(best.p[static_cast<std::size_t>(i)], 0.0);
    sigma(i, i) = v;
    dist_sq += (v - q[static_cast<std::size_t>(i)]) * (v - q[static_cast<std::size_t>(i)]);
    purity += v * v;
  }
  CMat rho = sys.U * sigma * sys.U.adjoint();
  return MleResult{DensityOperator::from_matrix(std::move(rho)), std::sqrt(dist_sq), purity,
                   best.k};
}

}  // namespace

MleResult mle_purity_leq(const HermitianOperator& h, double t) {
  const Eigen::Index d = h.dim();
  const double k_lo = 1.0 / static_cast<double>(d);
  if (t < k_lo - kFeasEps) throw InfeasibleError(t, k_lo);
  const double k_hi = std::min(std::max(t, k_lo), 1.0);

  EigenSystem sys = eigendecompose(h);
  const Vec& q = sys.eigenvalues;
  const double qq = kernels::vdot(q, q);

  if (k_hi - k_lo <= kOuterScanTol) {
    return finish(sys, q, eval_scan(q, qq, k_lo));
  }

  // Dense grid guards against non-unimodality; golden section refines the
  // best bracket. Endpoints are re-evaluated exactly.
  std::vector<double> objective(kOuterGridPoints);
  int best_idx = 0;
  for (int i = 0; i < kOuterGridPoints; ++i) {
    const double k =
        k_lo + (k_hi - k_lo) * static_cast<double>(i) / static_cast<double>(kOuterGridPoints - 1);
    objective[static_cast<std::size_t>(i)] = eval_scan(q, qq, k).objective;
    if (objective[static_cast<std::size_t>(i)] < objective[static_cast<std::size_t>(best_idx)]) {
      best_idx = i;
    }
  }
  auto grid_k = [&](int i) {
    return k_lo + (k_hi - k_lo) * static_cast<double>(i) / static_cast<double>(kOuterGridPoints - 1);
  };
  double a = grid_k(std::max(0, best_idx - 1));
  double b = grid_k(std::min(kOuterGridPoints - 1, best_idx + 1));

  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = eval_scan(q, qq, x1).objective;
  double f2 = eval_scan(q, qq, x2).objective;
  int guard = 0;
  while (b - a > kOuterScanTol && guard++ < 200) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = eval_scan(q, qq, x1).objective;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = eval_scan(q, qq, x2).objective;
    }
  }

  ScanPoint best = eval_scan(q, qq, 0.5 * (a + b));
  for (double k : {k_lo, k_hi}) {
    ScanPoint cand = eval_scan(q, qq, k);
    if (cand.objective < best.objective) best = std::move(cand);
  }
  return finish(sys, q, best);
}

MleResult mle_purity_eq(const HermitianOperator& h, double t) {
  const Eigen::Index d = h.dim();
  const double k_lo = 1.0 / static_cast<double>(d);
  if (t < k_lo - kFeasEps || t > 1.0 + kFeasEps) throw InfeasibleError(t, k_lo);
  EigenSystem sys = eigendecompose(h);
  const Vec& q = sys.eigenvalues;
  const double qq = kernels::vdot(q, q);
  return finish(sys, q, eval_scan(q, qq, std::min(t, 1.0)));
}

MleResult mle_plain(const HermitianOperator& h) {
  return mle_purity_leq(h, 1.0);
}

std::vector<CMat> pauli_basis(int n_qubits) {
  if (n_qubits < 1) throw ValidationError("pauli_basis needs at least one qubit");
  using namespace std::complex_literals;
  std::vector<CMat> singles(4, CMat::Zero(2, 2));
  singles[0] = CMat::Identity(2, 2);
  singles[1] << 0, 1, 1, 0;
  singles[2] << 0, -1i, 1i, 0;
  singles[3] << 1, 0, 0, -1;

  std::vector<CMat> basis = {CMat::Identity(1, 1)};
  for (int qubit = 0; qubit < n_qubits; ++qubit) {
    std::vector<CMat> next;
    next.reserve(basis.size() * 4);
    for (const CMat& left : basis) {
      for (const CMat& p : singles) next.push_back(kron(left, p));
    }
    basis = std::move(next);
  }
  const double norm = 1.0 / std::sqrt(std::pow(2.0, n_qubits));
  for (CMat& b : basis) b *= norm;
  return basis;
}

std::vector<CMat> hermitian_elementary_basis(int d) {
  if (d < 1) throw ValidationError("basis dimension must be positive");
  using namespace std::complex_literals;
  std::vector<CMat> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    CMat e = CMat::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      CMat sym = CMat::Zero(d, d);
      sym(i, j) = inv_sqrt2;
      sym(j, i) = inv_sqrt2;
      basis.push_back(std::move(sym));
      CMat anti = CMat::Zero(d, d);
      anti(i, j) = -1i * inv_sqrt2;
      anti(j, i) = 1i * inv_sqrt2;
      basis.push_back(std::move(anti));
    }
  }
  return basis;
}

}  // namespace puropt
