#include "puropt/channel_tools.hpp"

#include <cmath>
#include <complex>

#include "puropt/solve.hpp"

namespace puropt {

namespace {

using Cx = std::complex<double>;

CMat choi_matrix_from_kraus(const std::vector<CMat>& kraus, int d_in, int d_out) {
  const Eigen::Index dim = static_cast<Eigen::Index>(d_in) * d_out;
  CMat j = CMat::Zero(dim, dim);
  Eigen::VectorXcd w(dim);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d_in));
  for (const CMat& k : kraus) {
    for (int a = 0; a < d_in; ++a) {
      for (int b = 0; b < d_out; ++b) {
        w(static_cast<Eigen::Index>(a) * d_out + b) = k(b, a) * inv_sqrt;
      }
    }
    j += w * w.adjoint();
  }
  return j;
}

}  // namespace

ChannelRep ChannelRep::from_kraus(std::vector<CMat> kraus) {
  if (kraus.empty()) throw ValidationError("channel needs at least one Kraus operator");
  const Eigen::Index d_out = kraus.front().rows();
  const Eigen::Index d_in = kraus.front().cols();
  if (d_in < 1 || d_out < 1) throw ValidationError("Kraus operators must be nonempty");
  CMat gram = CMat::Zero(d_in, d_in);
  for (const CMat& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) {
      throw DimensionMismatchError("Kraus operators must share one shape");
    }
    if (!k.allFinite()) throw ValidationError("Kraus operator has non-finite entries");
    gram += k.adjoint() * k;
  }
  if (max_abs_entry(gram - CMat::Identity(d_in, d_in)) > herm_tolerance(d_in)) {
    throw NotTracePreservingError("sum K†K deviates from the identity");
  }
  ChannelRep ch;
  ch.d_in_ = static_cast<int>(d_in);
  ch.d_out_ = static_cast<int>(d_out);
  ch.choi_ = choi_matrix_from_kraus(kraus, ch.d_in_, ch.d_out_);
  ch.kraus_ = std::move(kraus);
  return ch;
}

ChannelRep ChannelRep::from_choi(CMat choi, int d_in, int d_out) {
  const Eigen::Index dim = static_cast<Eigen::Index>(d_in) * d_out;
  if (choi.rows() != dim || choi.cols() != dim) {
    throw DimensionMismatchError("Choi matrix size must be d_in*d_out");
  }
  HermitianOperator h(std::move(choi));  // validates Hermiticity, symmetrizes
  EigenSystem sys = eigendecompose(h);
  if (sys.eigenvalues.back() < -kFeasEps) {
    throw ValidationError("Choi matrix is not positive semi-definite");
  }
  // Trace preservation: partial trace over the output equals I/d_in.
  CMat tr_b = CMat::Zero(d_in, d_in);
  for (int a = 0; a < d_in; ++a) {
    for (int a2 = 0; a2 < d_in; ++a2) {
      Cx acc = 0.0;
      for (int b = 0; b < d_out; ++b) {
        acc += h.matrix()(static_cast<Eigen::Index>(a) * d_out + b,
                          static_cast<Eigen::Index>(a2) * d_out + b);
      }
      tr_b(a, a2) = acc;
    }
  }
  if (max_abs_entry(tr_b - CMat::Identity(d_in, d_in) / static_cast<double>(d_in)) >
      herm_tolerance(dim)) {
    throw NotTracePreservingError("partial trace of the Choi deviates from I/d_in");
  }
  ChannelRep ch;
  ch.d_in_ = d_in;
  ch.d_out_ = d_out;
  ch.choi_ = h.matrix();
  return ch;
}

CMat choi_from_kraus(const ChannelRep& channel) {
  if (!channel.has_kraus()) throw ValidationError("channel carries no Kraus representation");
  return choi_matrix_from_kraus(channel.kraus(), channel.d_in(), channel.d_out());
}

CMat apply_channel(const ChannelRep& channel, const CMat& a) {
  const int d_in = channel.d_in();
  const int d_out = channel.d_out();
  if (a.rows() != d_in || a.cols() != d_in) {
    throw DimensionMismatchError("input operator must be d_in x d_in");
  }
  if (channel.has_kraus()) {
    CMat out = CMat::Zero(d_out, d_out);
    for (const CMat& k : channel.kraus()) out += k * a * k.adjoint();
    return out;
  }
  const CMat& j = channel.choi();
  CMat out = CMat::Zero(d_out, d_out);
  for (int b = 0; b < d_out; ++b) {
    for (int b2 = 0; b2 < d_out; ++b2) {
      Cx acc = 0.0;
      for (int i = 0; i < d_in; ++i) {
        for (int i2 = 0; i2 < d_in; ++i2) {
          acc += a(i, i2) * j(static_cast<Eigen::Index>(i) * d_out + b,
                              static_cast<Eigen::Index>(i2) * d_out + b2);
        }
      }
      out(b, b2) = static_cast<double>(d_in) * acc;
    }
  }
  return out;
}

CMat apply_dual_map(const ChannelRep& channel, const CMat& b) {
  const int d_in = channel.d_in();
  const int d_out = channel.d_out();
  if (b.rows() != d_out || b.cols() != d_out) {
    throw DimensionMismatchError("observable must be d_out x d_out");
  }
  if (channel.has_kraus()) {
    CMat out = CMat::Zero(d_in, d_in);
    for (const CMat& k : channel.kraus()) out += k.adjoint() * b * k;
    return out;
  }
  const CMat& j = channel.choi();
  CMat out = CMat::Zero(d_in, d_in);
  for (int i = 0; i < d_in; ++i) {
    for (int i2 = 0; i2 < d_in; ++i2) {
      Cx acc = 0.0;
      for (int bb = 0; bb < d_out; ++bb) {
        for (int bb2 = 0; bb2 < d_out; ++bb2) {
          acc += b(bb, bb2) * j(static_cast<Eigen::Index>(i2) * d_out + bb2,
                                static_cast<Eigen::Index>(i) * d_out + bb);
        }
      }
      out(i, i2) = static_cast<double>(d_in) * acc;
    }
  }
  return out;
}

CMat dual_choi(const ChannelRep& channel) {
  const int d_in = channel.d_in();
  const int d_out = channel.d_out();
  const Eigen::Index dim = static_cast<Eigen::Index>(d_out) * d_in;
  if (channel.has_kraus()) {
    CMat j = CMat::Zero(dim, dim);
    Eigen::VectorXcd w(dim);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d_out));
    for (const CMat& k : channel.kraus()) {
      for (int r = 0; r < d_out; ++r) {
        for (int a = 0; a < d_in; ++a) {
          w(static_cast<Eigen::Index>(r) * d_in + a) = std::conj(k(r, a)) * inv_sqrt;
        }
      }
      j += w * w.adjoint();
    }
    return j;
  }
  // Block (r, r') is N†(|r><r'|)/d_out.
  CMat j(dim, dim);
  CMat basis = CMat::Zero(d_out, d_out);
  for (int r = 0; r < d_out; ++r) {
    for (int r2 = 0; r2 < d_out; ++r2) {
      basis(r, r2) = 1.0;
      j.block(static_cast<Eigen::Index>(r) * d_in, static_cast<Eigen::Index>(r2) * d_in, d_in,
              d_in) = apply_dual_map(channel, basis) / static_cast<double>(d_out);
      basis(r, r2) = 0.0;
    }
  }
  return j;
}

double noisy_prep_fidelity(const ChannelRep& channel, const DensityOperator& psi) {
  if (psi.dim() != channel.d_out()) {
    throw DimensionMismatchError("target state must live on the output space");
  }
  EigenSystem target = eigendecompose(HermitianOperator(psi.matrix()));
  if (target.eigenvalues.size() > 1 && target.eigenvalues[1] > kFeasEps) {
    throw NotPureTargetError("target state is not rank one");
  }
  EigenSystem sys = eigendecompose(HermitianOperator(apply_dual_map(channel, psi.matrix())));
  const double value = sys.eigenvalues.front();
  if (value < -kFeasEps || value > 1.0 + kFeasEps) {
    throw InternalKKTViolationError("dual-map fidelity outside [0, 1]");
  }
  return value;
}

double noisy_ground_energy(const ChannelRep& channel, const HermitianOperator& h) {
  if (h.dim() != channel.d_out()) {
    throw DimensionMismatchError("Hamiltonian must live on the output space");
  }
  EigenSystem noisy = eigendecompose(HermitianOperator(apply_dual_map(channel, h.matrix())));
  EigenSystem clean = eigendecompose(h);
  const double value = noisy.eigenvalues.back();
  if (value < clean.eigenvalues.back() - kNumEps) {
    throw InternalKKTViolationError("noisy ground energy fell below the noiseless one");
  }
  return value;
}

double entanglement_fidelity_bounded_purity(const ChannelRep& channel, double t,
                                            SolverKind solver) {
  if (channel.d_in() != channel.d_out()) {
    throw ValidationError("entanglement passing assumes d_in == d_out");
  }
  const int d = channel.d_in();
  const double joint_dim = static_cast<double>(d) * d;
  if (t < 1.0 / joint_dim - kFeasEps) {
    throw InfeasibleError(t, 1.0 / joint_dim);
  }
  HermitianOperator h(dual_choi(channel));
  return max_expectation(h, t, solver).value;
}

ChannelRep make_channel(const ExampleChannel& ch) {
  if (ch.d < 2) throw ValidationError("example channels need d >= 2");
  const int d = ch.d;
  switch (ch.kind) {
    case ChannelKind::Identity:
      return ChannelRep::from_kraus({CMat::Identity(d, d)});
    case ChannelKind::Trace: {
      // Kraus set {|0><i|}: N(rho) = Tr(rho) |0><0|.
      std::vector<CMat> kraus;
      kraus.reserve(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        CMat k = CMat::Zero(d, d);
        k(0, i) = 1.0;
        kraus.push_back(std::move(k));
      }
      return ChannelRep::from_kraus(std::move(kraus));
    }
    case ChannelKind::IdentityTensorTrace:
      return tensor_channel(make_channel({ChannelKind::Identity, d}),
                            make_channel({ChannelKind::Trace, d}));
  }
  throw ValidationError("unknown channel kind");
}

double closed_form_fidelity(const ExampleChannel& ch, double t) {
  const double d = static_cast<double>(ch.d);
  const double d2 = d * d;
  const double d4 = d2 * d2;
  const double lo = ch.kind == ChannelKind::IdentityTensorTrace ? 1.0 / d4 : 1.0 / d2;
  if (t < lo - kFeasEps || t > 1.0 + kFeasEps) {
    throw OutOfWindowError("t outside the validity window of the closed form");
  }
  switch (ch.kind) {
    case ChannelKind::Identity:
      return (1.0 + std::sqrt(std::max(0.0, (t * d2 - 1.0) * (d2 - 1.0)))) / d2;
    case ChannelKind::Trace:
      if (t >= 1.0 / d) return 1.0 / d;
      return (1.0 + std::sqrt(std::max(0.0, (t * d2 - 1.0) * (d - 1.0)))) / d2;
    case ChannelKind::IdentityTensorTrace:
      if (t >= 1.0 / d) return 1.0 / d;
      // Continuous at t = 1/d and consistent with the optimizer weight
      // gamma = sqrt((t d^4 - 1)/(d^3 - 1)).
      return (1.0 + std::sqrt(std::max(0.0, (t * d4 - 1.0) * (d * d2 - 1.0)))) / d4;
  }
  throw ValidationError("unknown channel kind");
}

ChannelRep tensor_channel(const ChannelRep& n1, const ChannelRep& n2) {
  if (n1.has_kraus() && n2.has_kraus()) {
    std::vector<CMat> kraus;
    kraus.reserve(n1.kraus().size() * n2.kraus().size());
    for (const CMat& a : n1.kraus()) {
      for (const CMat& b : n2.kraus()) kraus.push_back(kron(a, b));
    }
    return ChannelRep::from_kraus(std::move(kraus));
  }
  return ChannelRep::from_choi(
      tensor_choi(n1.choi(), n1.d_in(), n1.d_out(), n2.choi(), n2.d_in(), n2.d_out()),
      n1.d_in() * n2.d_in(), n1.d_out() * n2.d_out());
}

CMat tensor_choi(const CMat& j1, int d1_in, int d1_out, const CMat& j2, int d2_in, int d2_out) {
  const int din = d1_in * d2_in;
  const int dout = d1_out * d2_out;
  const Eigen::Index dim = static_cast<Eigen::Index>(din) * dout;
  CMat out(dim, dim);
  auto idx1 = [&](int a, int b) { return static_cast<Eigen::Index>(a) * d1_out + b; };
  auto idx2 = [&](int a, int b) { return static_cast<Eigen::Index>(a) * d2_out + b; };
  for (int a1 = 0; a1 < d1_in; ++a1)
    for (int a2 = 0; a2 < d2_in; ++a2)
      for (int b1 = 0; b1 < d1_out; ++b1)
        for (int b2 = 0; b2 < d2_out; ++b2) {
          const Eigen::Index row =
              (static_cast<Eigen::Index>(a1) * d2_in + a2) * dout + (b1 * d2_out + b2);
          for (int a1p = 0; a1p < d1_in; ++a1p)
            for (int a2p = 0; a2p < d2_in; ++a2p)
              for (int b1p = 0; b1p < d1_out; ++b1p)
                for (int b2p = 0; b2p < d2_out; ++b2p) {
                  const Eigen::Index col =
                      (static_cast<Eigen::Index>(a1p) * d2_in + a2p) * dout + (b1p * d2_out + b2p);
                  out(row, col) =
                      j1(idx1(a1, b1), idx1(a1p, b1p)) * j2(idx2(a2, b2), idx2(a2p, b2p));
                }
        }
  return out;
}

GapResult multiplicativity_gap(const ExampleChannel& c1, const ExampleChannel& c2, double t,
                               GapMode mode, SolverKind solver) {
  const double tf = mode == GapMode::SameT ? t : std::sqrt(t);
  GapResult out{};
  try {
    const ChannelRep joint = tensor_channel(make_channel(c1), make_channel(c2));
    out.joint = entanglement_fidelity_bounded_purity(joint, t, solver);
    out.product = entanglement_fidelity_bounded_purity(make_channel(c1), tf, solver) *
                  entanglement_fidelity_bounded_purity(make_channel(c2), tf, solver);
  } catch (const InfeasibleError& e) {
    throw OutOfWindowError(std::string("t outside the joint/product validity window: ") +
                           e.what());
  }
  out.gap = out.joint - out.product;
  if (out.gap < -kNumEps) {
    throw InternalKKTViolationError("multiplicativity gap came out negative");
  }
  return out;
}

}  // namespace puropt
