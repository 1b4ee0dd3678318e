// Acceptance suite: one pass/fail line per criterion. Exit code equals the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "puropt/bench.hpp"
#include "puropt/channel_tools.hpp"
#include "puropt/dual_solver.hpp"
#include "puropt/kernels.hpp"
#include "puropt/recursive_solver.hpp"
#include "puropt/simplex_core.hpp"
#include "puropt/solve.hpp"
#include "puropt/tomography.hpp"
#include "test_util.hpp"

using namespace puropt;

namespace {

struct Check {
  bool ok = true;
  int reported = 0;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (reported < 3) {
      if (reported > 0) detail << " | ";
      detail << what;
    }
    ++reported;
  }
};

double max_violation(double value, double reference) { return std::fabs(value - reference); }

void criterion_basis_vector(Check& c) {
  for (std::size_t n : {2u, 4u, 8u, 16u, 64u}) {
    Vec q(n, 0.0);
    q[0] = 1.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int j = 1; j <= 20; ++j) {
      const double t = inv_n + (1.0 - inv_n) * j / 20.0;
      const double expected = basis_vector_optimum(n, t);
      const double dual = solve_dual(q, t).optimum;
      const double rec = solve_recursive(q, t).optimum;
      c.require(max_violation(dual, expected) <= 1e-10,
                "dual off closed form at n=" + std::to_string(n) + " t=" + std::to_string(t) +
                    " err=" + std::to_string(max_violation(dual, expected)));
      c.require(max_violation(rec, expected) <= 1e-10,
                "recursive off closed form at n=" + std::to_string(n) +
                    " t=" + std::to_string(t));
    }
  }
}

void criterion_channel_grid(Check& c, ChannelKind kind, double lo, double tol) {
  const ExampleChannel example{kind, 2};
  const ChannelRep channel = make_channel(example);
  for (int i = 0; i < 50; ++i) {
    const double t = lo + (1.0 - lo) * i / 49.0;
    const double numeric = entanglement_fidelity_bounded_purity(channel, t);
    const double closed = closed_form_fidelity(example, t);
    c.require(max_violation(numeric, closed) <= tol,
              "grid mismatch at t=" + std::to_string(t) + " err=" +
                  std::to_string(max_violation(numeric, closed)));
  }
}

void criterion_gaps(Check& c) {
  const ExampleChannel id2{ChannelKind::Identity, 2};
  const ExampleChannel tr2{ChannelKind::Trace, 2};
  for (double t : {0.3, 0.5, 0.7}) {
    const auto g = multiplicativity_gap(id2, id2, t, GapMode::SameT);
    c.require(g.gap > 1e-6, "identity same-t gap not strict at t=" + std::to_string(t));
  }
  c.require(std::fabs(multiplicativity_gap(id2, id2, 1.0, GapMode::SameT).gap) < 1e-8,
            "identity same-t gap nonzero at t=1");
  c.require(multiplicativity_gap(tr2, tr2, 0.3, GapMode::SameT).gap > 1e-6,
            "trace same-t gap not strict at t=0.3");
  c.require(std::fabs(multiplicativity_gap(tr2, tr2, 0.75, GapMode::SameT).gap) < 1e-8,
            "trace same-t gap nonzero at t=0.75");
  c.require(std::fabs(multiplicativity_gap(tr2, tr2, 1.0 / 16, GapMode::SqrtT).gap) < 1e-8,
            "trace sqrt-t gap nonzero at t=1/16");
}

void criterion_ground_energy(Check& c) {
  auto rng = testutil::make_rng(2024);
  int trials = 0;
  while (trials < 1000) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const ChannelRep ch = testutil::random_channel(rng, d, d, 1 + static_cast<int>(rng() % 4));
    const HermitianOperator h(testutil::random_hermitian(rng, d));
    const double noisy = noisy_ground_energy(ch, h);
    const double clean = eigendecompose(h).eigenvalues.back();
    c.require(noisy >= clean - 1e-9, "ground energy dropped under noise");
    ++trials;
  }
}

void criterion_oracle_equivalence(Check& c) {
  auto rng = testutil::make_rng(4096);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const Vec q = testutil::random_gaussian(rng, n);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double t = inv_n + (1.0 - inv_n) * ((rng() % 1000000) / 1000000.0);
    const auto dual = solve_dual(q, t);
    const auto rec = solve_recursive(q, t);
    const auto oracle = oracle_solve(q, t);
    c.require(std::fabs(dual.optimum - rec.optimum) <= 1e-9, "dual vs recursive spread");
    c.require(std::fabs(dual.optimum - oracle.optimum) <= 1e-9, "dual vs oracle spread");
    c.require(std::fabs(rec.optimum - oracle.optimum) <= 1e-9, "recursive vs oracle spread");
    c.require(check_feasible(dual.optimizer, t), "dual optimizer infeasible");
    c.require(check_feasible(rec.optimizer, t), "recursive optimizer infeasible");
    c.require(check_feasible(oracle.optimizer, t), "oracle optimizer infeasible");
  }
}

void criterion_exact_purity(Check& c) {
  auto rng = testutil::make_rng(8213);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    const Vec q = testutil::random_gaussian(rng, n);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double t = inv_n + (1.0 - inv_n) * (0.005 + 0.99 * (rng() % 1000000) / 1000000.0);
    const auto plain = solve_dual(q, t);
    const auto exact = solve_dual(q, t, true);
    c.require(std::fabs(testutil::purity_of(exact.optimizer) - t) <= 1e-9,
              "exact-purity optimizer off the sphere");
    c.require(std::fabs(exact.optimum - plain.optimum) <= 1e-12, "exact-purity changed optimum");
  }
}

void criterion_tomography(Check& c) {
  CMat h = CMat::Zero(2, 2);
  h(0, 0) = 1.2;
  h(1, 1) = -0.2;
  const HermitianOperator op(h);

  const auto constrained = mle_purity_leq(op, 0.58);
  CMat expected = CMat::Zero(2, 2);
  expected(0, 0) = 0.7;
  expected(1, 1) = 0.3;
  c.require(max_abs_entry(constrained.rho.matrix() - expected) <= 1e-8,
            "purity-0.58 estimate off diag(0.7, 0.3)");

  const auto projected = mle_purity_leq(op, 1.0);
  expected(0, 0) = 1.0;
  expected(1, 1) = 0.0;
  c.require(max_abs_entry(projected.rho.matrix() - expected) <= 1e-8,
            "simplex projection off diag(1, 0)");
}

void criterion_scaling(Check& c) {
  BenchConfig config;
  config.n_values = {250, 500, 1000, 2000, 4000, 8000};
  config.samples_per_n = 50;
  config.solvers = {SolverKind::Dual, SolverKind::Recursive};
  config.seed = 83;
  config.median_of_3 = true;
  const auto rows = run_bench(config);

  const auto dual_means = mean_seconds_by_n(rows, SolverKind::Dual);
  const auto rec_means = mean_seconds_by_n(rows, SolverKind::Recursive);
  std::printf("  scaling means (n: dual / recursive seconds):\n");
  for (std::size_t i = 0; i < dual_means.size(); ++i) {
    std::printf("    %5.0f: %.3e / %.3e\n", dual_means[i].first, dual_means[i].second,
                rec_means[i].second);
  }

  const double dual_lin = fit_polynomial(dual_means, 1).rms_residual;
  const double dual_cub = fit_polynomial(dual_means, 3).rms_residual;
  c.require(dual_lin <= 1.5 * dual_cub + 1e-15,
            "dual degree-1 residual " + std::to_string(dual_lin) + " vs degree-3 " +
                std::to_string(dual_cub));

  const double rec_quad = fit_polynomial(rec_means, 2).rms_residual;
  const double rec_cub = fit_polynomial(rec_means, 3).rms_residual;
  c.require(rec_quad <= 1.5 * rec_cub + 1e-15,
            "recursive degree-2 residual " + std::to_string(rec_quad) + " vs degree-3 " +
                std::to_string(rec_cub));

  const double dual_8000 = dual_means.back().second;
  const double rec_8000 = rec_means.back().second;
  c.require(dual_means.back().first == 8000.0 && rec_means.back().first == 8000.0,
            "means not aggregated at n=8000");
  c.require(rec_8000 >= 10.0 * dual_8000,
            "dual not 10x faster at n=8000: dual=" + std::to_string(dual_8000) +
                " recursive=" + std::to_string(rec_8000));
}

void criterion_duality_sandwich(Check& c) {
  auto rng = testutil::make_rng(314159);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const Vec q = testutil::random_simplex(rng, n);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double t = inv_n + (1.0 - inv_n) * (0.01 + 0.97 * (rng() % 1000000) / 1000000.0);
    const double tc = clamp_purity(n, t);
    if (!(tc > inv_n) || !(tc < 1.0)) continue;
    const auto r = solve_dual(q, t);
    const auto [z_min, z_max] = z_interval(q, tc);
    for (int s = 0; s < 50; ++s) {
      const double z = z_min + (z_max - z_min) * (rng() % 1000000) / 1000000.0;
      c.require(dual_h(z, q, tc) >= r.optimum - 1e-9, "h(z) fell below the optimum");
    }
    const auto state = minimize_h(q, tc);
    c.require(state.h_star <= r.optimum + 1e-9, "h(z*) above the reported optimum");
  }
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 = no budget
  std::function<void(Check&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "closed-form basis-vector optimum, both solvers", 1.0, criterion_basis_vector},
      {2, "trace-channel fidelity grid (numerical path)", 5.0,
       [](Check& c) { criterion_channel_grid(c, ChannelKind::Trace, 0.25, 1e-8); }},
      {3, "identity-channel fidelity grid", 0.0,
       [](Check& c) { criterion_channel_grid(c, ChannelKind::Identity, 0.25, 1e-8); }},
      {4, "identity x trace fidelity grid (joint dimension 16)", 0.0,
       [](Check& c) { criterion_channel_grid(c, ChannelKind::IdentityTensorTrace, 1.0 / 16, 1e-7); }},
      {5, "multiplicativity gaps", 0.0, criterion_gaps},
      {6, "ground-energy monotonicity, 1000 random pairs", 30.0, criterion_ground_energy},
      {7, "three-solver equivalence on 500 instances", 0.0, criterion_oracle_equivalence},
      {8, "exact-purity optimizers", 0.0, criterion_exact_purity},
      {9, "tomography worked examples", 0.0, criterion_tomography},
      {10, "scaling study: fits and dual/recursive ratio", 600.0, criterion_scaling},
      {11, "duality sandwich", 0.0, criterion_duality_sandwich},
  };

  int failures = 0;
  for (const Criterion& crit : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.body(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (crit.budget_seconds > 0.0 && elapsed > crit.budget_seconds) {
      check.require(false, "runtime budget exceeded: " + std::to_string(elapsed) + " s > " +
                               std::to_string(crit.budget_seconds) + " s");
    }
    std::printf("criterion %2d [%s] %s (%.2f s)%s%s\n", crit.id,
                check.ok ? "PASS" : "FAIL", crit.name.c_str(), elapsed,
                check.ok ? "" : " -- ", check.ok ? "" : check.detail.str().c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
  return failures;
}
