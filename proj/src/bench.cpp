#include "puropt/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include <Eigen/Dense>
#include <json.hpp>

#include "puropt/errors.hpp"
#include "puropt/solve.hpp"

namespace puropt {

namespace {

std::mt19937_64 instance_rng(int n, std::uint64_t seed, std::uint64_t index, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32), static_cast<std::uint32_t>(n), tag};
  return std::mt19937_64(seq);
}

// Uniform draw on (0, 1), identical across platforms for a given stream.
double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

}  // namespace

Vec gen_random_instance(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 2) throw ValidationError("instances need n >= 2");
  std::mt19937_64 rng = instance_rng(n, seed, index, 0x71u);
  Vec q(static_cast<std::size_t>(n));
  double sum = 0.0;
  double comp = 0.0;  // Kahan carry
  for (double& x : q) {
    x = -std::log(unit_open(rng));
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  for (double& x : q) x /= sum;
  return q;
}

double bench_instance_t(int n, std::uint64_t seed, std::uint64_t index) {
  // The uniform draw is shared across n (paired instances), only the
  // interval (1/n, 1) depends on the dimension.
  std::mt19937_64 rng = instance_rng(0, seed, index, 0x74u);
  const double inv_n = 1.0 / static_cast<double>(n);
  return inv_n + (1.0 - inv_n) * unit_open(rng);
}

namespace {

struct Instance {
  int n_index;
  int n;
  int sample;
  Vec q;
  double t;
};

// One timing estimate: solves are batched until the batch runs for at least
// kMinBatchSeconds, then averaged. Short solves would otherwise be dominated
// by clock granularity and interrupt noise.
constexpr double kMinBatchSeconds = 4e-3;

double batched_seconds(const Vec& q, double t, SolverKind solver, SolveResult* result) {
  int reps = 1;
  for (;;) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) *result = solve(q, t, solver);
    const auto stop = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(stop - start).count();
    if (elapsed >= kMinBatchSeconds || reps >= 1 << 20) {
      return std::max(elapsed / reps, 1e-12);
    }
    reps = elapsed <= 0.0 ? reps * 16
                          : static_cast<int>(std::min(1.0 * (1 << 20),
                                                      reps * (1.25 * kMinBatchSeconds / elapsed)) +
                                             1.0);
  }
}

double timed_solve(const Vec& q, double t, SolverKind solver, bool median_of_3, double* optimum) {
  const int repeats = median_of_3 ? 3 : 1;
  std::array<double, 3> times{};
  SolveResult result;
  for (int r = 0; r < repeats; ++r) {
    times[static_cast<std::size_t>(r)] = batched_seconds(q, t, solver, &result);
  }
  *optimum = result.optimum;
  double seconds = times[0];
  if (median_of_3) {
    std::sort(times.begin(), times.end());
    seconds = times[1];
  }
  return seconds;
}

void write_repro(const std::string& path, const Instance& inst,
                 const std::vector<std::pair<SolverKind, double>>& optima) {
  nlohmann::json j;
  j["n"] = inst.n;
  j["t"] = inst.t;
  j["q"] = inst.q;
  for (const auto& [solver, value] : optima) j["optima"][to_string(solver)] = value;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.solvers.empty()) throw ValidationError("benchmark needs at least one solver");
  if (config.samples_per_n < 1) throw ValidationError("samples_per_n must be >= 1");
  if (config.n_values.empty()) throw ValidationError("benchmark needs at least one n");
  if (!std::is_sorted(config.n_values.begin(), config.n_values.end())) {
    throw ValidationError("n_values must be ascending");
  }

  std::vector<Instance> instances;
  instances.reserve(config.n_values.size() * static_cast<std::size_t>(config.samples_per_n));
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const int n = config.n_values[ni];
    for (int s = 0; s < config.samples_per_n; ++s) {
      Instance inst;
      inst.n_index = static_cast<int>(ni);
      inst.n = n;
      inst.sample = s;
      inst.q = gen_random_instance(n, config.seed, static_cast<std::uint64_t>(s));
      inst.t = config.t_policy.kind == TPolicy::Kind::Fixed
                   ? config.t_policy.fixed_t
                   : bench_instance_t(n, config.seed, static_cast<std::uint64_t>(s));
      instances.push_back(std::move(inst));
    }
  }

  const std::size_t solvers = config.solvers.size();
  std::vector<BenchRow> rows(instances.size() * solvers);
  std::string failure;

  // Execution order is round-robin over samples so that slow environmental
  // drift spreads evenly across all n instead of biasing one mean; row
  // storage stays n-major for a deterministic CSV.
  std::vector<std::size_t> order(instances.size());
  {
    std::size_t pos = 0;
    const std::size_t n_count = config.n_values.size();
    for (int s = 0; s < config.samples_per_n; ++s) {
      for (std::size_t ni = 0; ni < n_count; ++ni) {
        order[pos++] = ni * static_cast<std::size_t>(config.samples_per_n) +
                       static_cast<std::size_t>(s);
      }
    }
  }

  auto run_instance = [&](const Instance& inst, std::size_t slot) {
    std::vector<std::pair<SolverKind, double>> optima;
    optima.reserve(solvers);
    const Regime regime = classify_regime(inst.q.size(), inst.t, inst.q);
    for (std::size_t si = 0; si < solvers; ++si) {
      BenchRow row;
      row.n = inst.n;
      row.solver = config.solvers[si];
      row.sample_index = inst.sample;
      row.seconds = timed_solve(inst.q, inst.t, config.solvers[si], config.median_of_3,
                                &row.optimum);
      row.regime = regime;
      optima.emplace_back(config.solvers[si], row.optimum);
      rows[slot * solvers + si] = row;
    }
    double lo = optima.front().second, hi = lo;
    for (const auto& [solver, value] : optima) {
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    if (hi - lo > kBenchAgreementTol) {
      write_repro(config.repro_path, inst, optima);
      throw SolverDisagreementError("solver optima spread " + std::to_string(hi - lo) +
                                    " on n=" + std::to_string(inst.n) +
                                    " sample=" + std::to_string(inst.sample) +
                                    "; instance written to " + config.repro_path);
    }
  };

  // Warm up code paths and allocator arenas on the largest instance.
  {
    const Instance& widest = instances[instances.size() - 1];
    for (SolverKind solver : config.solvers) solve(widest.q, widest.t, solver);
  }

  if (!config.parallel) {
    for (std::size_t i : order) run_instance(instances[i], i);
  } else {
    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(instances.size())));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t slot = next.fetch_add(1);
          if (slot >= order.size()) return;
          try {
            run_instance(instances[order[slot]], order[slot]);
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (failure.empty()) failure = e.what();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (!failure.empty()) throw SolverDisagreementError(failure);
  }
  return rows;
}

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "n,solver,sample,seconds,optimum,regime\n";
  char buf[64];
  for (const BenchRow& row : rows) {
    out << row.n << ',' << to_string(row.solver) << ',' << row.sample_index << ',';
    std::snprintf(buf, sizeof buf, "%.9e", row.seconds);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.optimum);
    out << buf << ',' << to_string(row.regime) << '\n';
  }
}

PolyFit fit_polynomial(const std::vector<std::pair<double, double>>& points, int degree) {
  if (degree < 0) throw ValidationError("degree must be nonnegative");
  if (static_cast<int>(points.size()) <= degree) {
    throw ValidationError("need more points than the fit degree");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].first == points[j].first) {
        throw DegenerateDesignError("fit x-values must be distinct");
      }
    }
  }

  double scale = 0.0;
  for (const auto& [x, y] : points) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) scale = 1.0;

  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd vander(m, degree + 1);
  Eigen::VectorXd ys(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = points[static_cast<std::size_t>(i)].first / scale;
    double pow_x = 1.0;
    for (int k = 0; k <= degree; ++k) {
      vander(i, k) = pow_x;
      pow_x *= x;
    }
    ys(i) = points[static_cast<std::size_t>(i)].second;
  }
  Eigen::VectorXd sol = vander.colPivHouseholderQr().solve(ys);

  PolyFit fit;
  fit.coeffs.resize(static_cast<std::size_t>(degree) + 1);
  double scale_pow = 1.0;
  for (int k = 0; k <= degree; ++k) {
    fit.coeffs[static_cast<std::size_t>(k)] = sol(k) / scale_pow;
    scale_pow *= scale;
  }
  const Eigen::VectorXd residual = vander * sol - ys;
  fit.rms_residual = std::sqrt(residual.squaredNorm() / static_cast<double>(m));
  return fit;
}

std::vector<std::pair<double, double>> mean_seconds_by_n(const std::vector<BenchRow>& rows,
                                                         SolverKind solver) {
  std::map<int, std::pair<double, int>> acc;
  for (const BenchRow& row : rows) {
    if (row.solver != solver) continue;
    auto& slot = acc[row.n];
    slot.first += row.seconds;
    slot.second += 1;
  }
  std::vector<std::pair<double, double>> means;
  means.reserve(acc.size());
  for (const auto& [n, slot] : acc) {
    means.emplace_back(static_cast<double>(n), slot.first / slot.second);
  }
  return means;
}

}  // namespace puropt
