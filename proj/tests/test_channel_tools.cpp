#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "puropt/channel_tools.hpp"
#include "test_util.hpp"

using namespace puropt;
using testutil::make_rng;

namespace {

CMat ket_projector(int d, int i) {
  CMat m = CMat::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("choi matrices of the example channels") {
  const ChannelRep identity = make_channel({ChannelKind::Identity, 2});
  const CMat phi = testutil::max_entangled_projector(2);
  CHECK(max_abs_entry(identity.choi() - phi) < 1e-12);
  CHECK(std::fabs(identity.choi().trace().real() - 1.0) < 1e-12);

  const ChannelRep trace = make_channel({ChannelKind::Trace, 2});
  CMat expected = kron(CMat::Identity(2, 2) / 2.0, ket_projector(2, 0));
  CHECK(max_abs_entry(trace.choi() - expected) < 1e-12);

  // dual Choi of the trace channel: |0><0|_r (x) I_a / d
  CMat expected_dual = kron(ket_projector(2, 0), CMat::Identity(2, 2) / 2.0);
  CHECK(max_abs_entry(dual_choi(trace) - expected_dual) < 1e-12);

  // mixtures of channels mix their Choi matrices linearly
  const double lambda = 0.3;
  std::vector<CMat> kraus;
  kraus.push_back(std::sqrt(lambda) * CMat::Identity(2, 2));
  for (int i = 0; i < 2; ++i) {
    CMat k = CMat::Zero(2, 2);
    k(0, i) = std::sqrt(1.0 - lambda);
    kraus.push_back(k);
  }
  const ChannelRep mix = ChannelRep::from_kraus(std::move(kraus));
  CHECK(max_abs_entry(mix.choi() - (lambda * identity.choi() + (1 - lambda) * trace.choi())) <
        1e-12);
}

TEST_CASE("kraus validation") {
  std::vector<CMat> not_tp{CMat::Identity(2, 2) * 0.5};
  CHECK_THROWS_AS(ChannelRep::from_kraus(std::move(not_tp)), NotTracePreservingError);
  CHECK_THROWS_AS(ChannelRep::from_choi(CMat::Identity(4, 4), 2, 2), NotTracePreservingError);
}

TEST_CASE("apply_dual_map") {
  const ChannelRep identity = make_channel({ChannelKind::Identity, 3});
  auto rng = make_rng(83);
  const CMat b = testutil::random_hermitian(rng, 3);
  CHECK(max_abs_entry(apply_dual_map(identity, b) - b) < 1e-12);

  const ChannelRep trace = make_channel({ChannelKind::Trace, 2});
  CMat bz = CMat::Zero(2, 2);
  bz(0, 0) = 1.0;
  bz(1, 1) = -1.0;
  CHECK(max_abs_entry(apply_dual_map(trace, bz) - CMat::Identity(2, 2)) < 1e-12);

  CHECK_THROWS_AS(apply_dual_map(trace, CMat::Identity(3, 3)), DimensionMismatchError);
}

TEST_CASE("adjoint identity on random channels") {
  auto rng = make_rng(89);
  for (int trial = 0; trial < 40; ++trial) {
    const int d_in = 2 + static_cast<int>(rng() % 3);
    const int d_out = 2 + static_cast<int>(rng() % 3);
    const ChannelRep ch = testutil::random_channel(rng, d_in, d_out, 3);
    const CMat a = testutil::random_hermitian(rng, d_in);
    const CMat b = testutil::random_hermitian(rng, d_out);
    const double lhs = (apply_dual_map(ch, b) * a).trace().real();
    const double rhs = (b * apply_channel(ch, a)).trace().real();
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * (1.0 + std::fabs(rhs)));
  }
}

TEST_CASE("choi-only representation agrees with the kraus path") {
  auto rng = make_rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const ChannelRep kraus_rep = testutil::random_channel(rng, d, d, 4);
    const ChannelRep choi_rep = ChannelRep::from_choi(kraus_rep.choi(), d, d);
    const CMat a = testutil::random_hermitian(rng, d);
    const CMat b = testutil::random_hermitian(rng, d);
    CHECK(max_abs_entry(apply_channel(kraus_rep, a) - apply_channel(choi_rep, a)) <= 1e-10);
    CHECK(max_abs_entry(apply_dual_map(kraus_rep, b) - apply_dual_map(choi_rep, b)) <= 1e-10);
    CHECK(max_abs_entry(dual_choi(kraus_rep) - dual_choi(choi_rep)) <= 1e-10);
    // conjugation cross-check in the standard basis; with the reference
    // factor written first on both sides, the tensor factors swap
    const CMat jd = dual_choi(kraus_rep).conjugate();
    CMat swapped(jd.rows(), jd.cols());
    for (int r = 0; r < d; ++r)
      for (int a2 = 0; a2 < d; ++a2)
        for (int r2 = 0; r2 < d; ++r2)
          for (int b2 = 0; b2 < d; ++b2)
            swapped(static_cast<Eigen::Index>(a2) * d + r,
                    static_cast<Eigen::Index>(b2) * d + r2) =
                jd(static_cast<Eigen::Index>(r) * d + a2, static_cast<Eigen::Index>(r2) * d + b2);
    CHECK(max_abs_entry(kraus_rep.choi() - swapped) <= 1e-10);
  }
}

TEST_CASE("noisy preparation fidelity") {
  const ChannelRep identity = make_channel({ChannelKind::Identity, 2});
  const auto psi0 = DensityOperator::from_matrix(ket_projector(2, 0));
  const auto psi1 = DensityOperator::from_matrix(ket_projector(2, 1));
  CHECK(noisy_prep_fidelity(identity, psi0) == doctest::Approx(1.0));

  const ChannelRep trace = make_channel({ChannelKind::Trace, 2});
  CHECK(noisy_prep_fidelity(trace, psi0) == doctest::Approx(1.0));
  CHECK(noisy_prep_fidelity(trace, psi1) == doctest::Approx(0.0));
}

TEST_CASE("noisy ground energy") {
  CMat hz = CMat::Zero(2, 2);
  hz(0, 0) = 1.0;
  hz(1, 1) = -1.0;
  const HermitianOperator h(hz);
  const ChannelRep identity = make_channel({ChannelKind::Identity, 2});
  CHECK(noisy_ground_energy(identity, h) == doctest::Approx(-1.0));
  const ChannelRep trace = make_channel({ChannelKind::Trace, 2});
  CHECK(noisy_ground_energy(trace, h) == doctest::Approx(1.0));

  auto rng = make_rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const ChannelRep ch = testutil::random_channel(rng, d, d, 3);
    const HermitianOperator hr(testutil::random_hermitian(rng, d));
    const double noisy = noisy_ground_energy(ch, hr);
    const double clean = eigendecompose(hr).eigenvalues.back();
    CHECK(noisy >= clean - 1e-9);
  }
}

TEST_CASE("entanglement fidelity against closed forms") {
  const ChannelRep identity = make_channel({ChannelKind::Identity, 2});
  CHECK(entanglement_fidelity_bounded_purity(identity, 1.0) == doctest::Approx(1.0));
  CHECK(entanglement_fidelity_bounded_purity(identity, 0.5) ==
        doctest::Approx((1.0 + std::sqrt(3.0)) / 4).epsilon(1e-10));

  const ChannelRep trace = make_channel({ChannelKind::Trace, 2});
  CHECK(entanglement_fidelity_bounded_purity(trace, 0.75) == doctest::Approx(0.5).epsilon(1e-10));

  CHECK_THROWS_AS(entanglement_fidelity_bounded_purity(identity, 0.1), InfeasibleError);
}

TEST_CASE("closed form windows and values") {
  CHECK(closed_form_fidelity({ChannelKind::Trace, 2}, 0.375) ==
        doctest::Approx((1.0 + std::sqrt(0.5)) / 4).epsilon(1e-12));
  CHECK(closed_form_fidelity({ChannelKind::Identity, 2}, 0.25) == doctest::Approx(0.25));
  CHECK(closed_form_fidelity({ChannelKind::IdentityTensorTrace, 2}, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(closed_form_fidelity({ChannelKind::Identity, 2}, 0.2), OutOfWindowError);
  CHECK_THROWS_AS(closed_form_fidelity({ChannelKind::IdentityTensorTrace, 2}, 1.0 / 20),
                  OutOfWindowError);
}

TEST_CASE("numerical path matches the closed forms on a grid") {
  for (ChannelKind kind :
       {ChannelKind::Identity, ChannelKind::Trace, ChannelKind::IdentityTensorTrace}) {
    const ExampleChannel example{kind, 2};
    const ChannelRep channel = make_channel(example);
    const double lo = kind == ChannelKind::IdentityTensorTrace ? 1.0 / 16 : 0.25;
    for (int i = 0; i < 12; ++i) {
      const double t = lo + (1.0 - lo) * i / 11.0;
      const double numeric = entanglement_fidelity_bounded_purity(channel, t);
      CHECK(numeric == doctest::Approx(closed_form_fidelity(example, t)).epsilon(1e-8));
    }
  }
}

TEST_CASE("recursive and oracle solvers agree on the channel path") {
  const ChannelRep trace = make_channel({ChannelKind::Trace, 2});
  for (double t : {0.3, 0.6, 0.9}) {
    const double dual = entanglement_fidelity_bounded_purity(trace, t, SolverKind::Dual);
    const double rec = entanglement_fidelity_bounded_purity(trace, t, SolverKind::Recursive);
    const double oracle = entanglement_fidelity_bounded_purity(trace, t, SolverKind::Oracle);
    CHECK(dual == doctest::Approx(rec).epsilon(1e-10));
    CHECK(dual == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("fidelity at t=1 equals the largest Choi eigenvalue") {
  auto rng = make_rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const ChannelRep ch = testutil::random_channel(rng, 2, 2, 2 + static_cast<int>(rng() % 3));
    const double top = eigendecompose(HermitianOperator(ch.choi())).eigenvalues.front();
    CHECK(entanglement_fidelity_bounded_purity(ch, 1.0) == doctest::Approx(top).epsilon(1e-9));
  }
}

TEST_CASE("joint choi via kraus products and via permutation agree") {
  auto rng = make_rng(107);
  const ChannelRep a = testutil::random_channel(rng, 2, 2, 3);
  const ChannelRep b = testutil::random_channel(rng, 2, 2, 2);
  const ChannelRep joint = tensor_channel(a, b);
  const CMat permuted = tensor_choi(a.choi(), 2, 2, b.choi(), 2, 2);
  CHECK(max_abs_entry(joint.choi() - permuted) <= 1e-12);
}

TEST_CASE("multiplicativity gaps") {
  const ExampleChannel id2{ChannelKind::Identity, 2};
  const ExampleChannel tr2{ChannelKind::Trace, 2};

  auto g = multiplicativity_gap(id2, id2, 1.0, GapMode::SameT);
  CHECK(std::fabs(g.gap) < 1e-8);
  g = multiplicativity_gap(id2, id2, 0.5, GapMode::SameT);
  CHECK(g.gap > 1e-6);

  g = multiplicativity_gap(tr2, tr2, 0.3, GapMode::SameT);
  CHECK(g.gap > 1e-6);
  CHECK(g.joint == doctest::Approx(0.25).epsilon(1e-9));
  g = multiplicativity_gap(tr2, tr2, 0.75, GapMode::SameT);
  CHECK(std::fabs(g.gap) < 1e-8);

  g = multiplicativity_gap(tr2, tr2, 1.0 / 16, GapMode::SqrtT);
  CHECK(std::fabs(g.gap) < 1e-8);

  CHECK_THROWS_AS(multiplicativity_gap(tr2, tr2, 0.1, GapMode::SameT), OutOfWindowError);
}

TEST_CASE("gap nonnegativity across kinds, modes and budgets") {
  const std::vector<ExampleChannel> kinds{{ChannelKind::Identity, 2}, {ChannelKind::Trace, 2}};
  for (const auto& c1 : kinds) {
    for (const auto& c2 : kinds) {
      for (GapMode mode : {GapMode::SameT, GapMode::SqrtT}) {
        const double lo = mode == GapMode::SameT ? 0.26 : 1.0 / 15;
        for (int i = 0; i <= 8; ++i) {
          const double t = lo + (1.0 - lo) * i / 8.0;
          const auto g = multiplicativity_gap(c1, c2, t, mode);
          CHECK(g.gap >= -1e-10);
        }
      }
    }
  }
}
