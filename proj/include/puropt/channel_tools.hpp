#pragma once

#include <vector>

#include "puropt/operator_reduction.hpp"
#include "puropt/types.hpp"

namespace puropt {

// Quantum channel as a Kraus list and/or its Choi matrix (trace one,
// reference system first: index (a, b) = a * d_out + b).
class ChannelRep {
public:
  static ChannelRep from_kraus(std::vector<CMat> kraus);
  static ChannelRep from_choi(CMat choi, int d_in, int d_out);

  int d_in() const noexcept { return d_in_; }
  int d_out() const noexcept { return d_out_; }
  bool has_kraus() const noexcept { return !kraus_.empty(); }
  const std::vector<CMat>& kraus() const noexcept { return kraus_; }
  const CMat& choi() const noexcept { return choi_; }

private:
  ChannelRep() = default;
  int d_in_ = 0;
  int d_out_ = 0;
  std::vector<CMat> kraus_;
  CMat choi_;
};

// J = (I x N)(phi), trace one, PSD.
CMat choi_from_kraus(const ChannelRep& channel);

CMat apply_channel(const ChannelRep& channel, const CMat& a);
// N†(B) = sum K† B K; satisfies Tr(N†(B) A) = Tr(B N(A)).
CMat apply_dual_map(const ChannelRep& channel, const CMat& b);
// Choi matrix of the dual map on the reference x input space, trace one.
CMat dual_choi(const ChannelRep& channel);

// max F(N(rho), psi) over all states = lambda_max(N†(psi)).
double noisy_prep_fidelity(const ChannelRep& channel, const DensityOperator& psi);
// lambda_min(N†(H)); never below lambda_min(H).
double noisy_ground_energy(const ChannelRep& channel, const HermitianOperator& h);

// O_t(N): best fidelity to the maximally entangled state achievable through
// N from joint inputs of purity at most t. Reduces to max Tr(rho J^{N†})
// over the d^2-dimensional joint space.
double entanglement_fidelity_bounded_purity(const ChannelRep& channel, double t,
                                            SolverKind solver = SolverKind::Dual);

enum class ChannelKind { Identity, Trace, IdentityTensorTrace };

struct ExampleChannel {
  ChannelKind kind;
  int d;  // >= 2
};

ChannelRep make_channel(const ExampleChannel& ch);

// Piecewise closed forms for O_t of the example channels.
double closed_form_fidelity(const ExampleChannel& ch, double t);

// Joint channel N1 x N2 with spaces ordered (r1 r2, a1 a2).
ChannelRep tensor_channel(const ChannelRep& n1, const ChannelRep& n2);

// Compose two Choi matrices into the joint Choi, permuting from the
// (r1 a1) x (r2 a2) product order to (r1 r2, a1 a2).
CMat tensor_choi(const CMat& j1, int d1_in, int d1_out, const CMat& j2, int d2_in, int d2_out);

enum class GapMode { SameT, SqrtT };

struct GapResult {
  double joint;    // O_t(N1 x N2)
  double product;  // O_t(N1) O_t(N2), or at sqrt(t) in SqrtT mode
  double gap;      // joint - product, nonnegative
};

GapResult multiplicativity_gap(const ExampleChannel& c1, const ExampleChannel& c2, double t,
                               GapMode mode, SolverKind solver = SolverKind::Dual);

}  // namespace puropt
