#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "puropt/types.hpp"

namespace puropt {

struct TPolicy {
  enum class Kind { Fixed, Uniform } kind = Kind::Uniform;  // Uniform: t ~ U(1/n, 1)
  double fixed_t = 0.5;
};

struct BenchConfig {
  std::vector<int> n_values;  // ascending
  int samples_per_n = 50;
  TPolicy t_policy;
  std::vector<SolverKind> solvers;
  std::uint64_t seed = 0;
  bool median_of_3 = false;
  bool parallel = false;                         // across instances, never within a timed solve
  std::string repro_path = "bench_repro.json";   // written on solver disagreement
};

struct BenchRow {
  int n = 0;
  SolverKind solver = SolverKind::Dual;
  int sample_index = 0;
  double seconds = 0.0;
  double optimum = 0.0;
  Regime regime = Regime::General;
};

// Flat-Dirichlet instance (normalized exponentials), deterministic in
// (n, seed, index) across platforms.
Vec gen_random_instance(int n, std::uint64_t seed, std::uint64_t index);

// The t drawn for a given instance under the Uniform policy.
double bench_instance_t(int n, std::uint64_t seed, std::uint64_t index);

// Times one solve per (n, sample, solver) on a monotonic clock and asserts
// that per-instance optima across solvers stay within 1e-7 of each other.
std::vector<BenchRow> run_bench(const BenchConfig& config);

// Columns: n,solver,sample,seconds,optimum,regime. Header row, LF endings.
void write_csv(const std::vector<BenchRow>& rows, std::ostream& out);

struct PolyFit {
  Vec coeffs;  // ascending degree
  double rms_residual;
};

PolyFit fit_polynomial(const std::vector<std::pair<double, double>>& points, int degree);

std::vector<std::pair<double, double>> mean_seconds_by_n(const std::vector<BenchRow>& rows,
                                                         SolverKind solver);

inline constexpr double kBenchAgreementTol = 1e-7;

}  // namespace puropt
