// puropt command-line front end: vector solves, operator expectations,
// channel fidelity grids, tomography reconstruction, and the benchmark
// harness.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "puropt/bench.hpp"
#include "puropt/channel_tools.hpp"
#include "puropt/json_io.hpp"
#include "puropt/operator_reduction.hpp"
#include "puropt/solve.hpp"
#include "puropt/tomography.hpp"

namespace {

using puropt::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw puropt::ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw puropt::ValidationError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw puropt::ValidationError("cannot write " + path);
  out << text;
}

puropt::SolverKind parse_solver(const std::string& name) {
  auto kind = puropt::solver_from_string(name);
  if (!kind) throw puropt::ValidationError("unknown solver \"" + name + "\"");
  return *kind;
}

struct TGrid {
  double start, stop;
  int steps;
  double at(int i) const {
    if (steps == 1) return start;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

TGrid parse_t_grid(const std::string& text) {
  TGrid grid{};
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> grid.start >> c1 >> grid.stop >> c2 >> grid.steps) || c1 != ':' || c2 != ':' ||
      grid.steps < 1) {
    throw puropt::ValidationError("--t-grid expects start:stop:steps");
  }
  return grid;
}

int run_solve(const std::string& q_path, double t, const std::string& solver_name,
              bool exact_purity, const std::string& out_path) {
  const puropt::Vec q = puropt::vector_from_json(read_json_file(q_path));
  const puropt::SolveResult result = puropt::solve(q, t, parse_solver(solver_name), exact_purity);
  const std::string text = puropt::solve_result_to_json(result).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
  return 0;
}

int run_expect(const std::string& h_path, double t, bool min_energy, bool fidelity_target,
               const std::string& solver_name) {
  const puropt::CMat m = puropt::matrix_from_json(read_json_file(h_path));
  const puropt::SolverKind solver = parse_solver(solver_name);
  json out;
  if (fidelity_target) {
    const auto psi = puropt::DensityOperator::from_matrix(m);
    out["value"] = puropt::max_fidelity_pure(psi, t);
    out["mode"] = "fidelity";
  } else {
    const puropt::HermitianOperator h(m);
    const auto r = min_energy ? puropt::min_energy(h, t, solver)
                              : puropt::max_expectation(h, t, solver);
    out["value"] = r.value;
    out["mode"] = min_energy ? "min_energy" : "max_expectation";
    out["rho"] = puropt::matrix_to_json(r.rho.matrix());
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_channel(const std::string& kind_name, int d, const std::string& grid_text,
                const std::string& mode_name, const std::string& out_path,
                const std::string& solver_name) {
  puropt::ChannelKind kind;
  if (kind_name == "identity") {
    kind = puropt::ChannelKind::Identity;
  } else if (kind_name == "trace") {
    kind = puropt::ChannelKind::Trace;
  } else if (kind_name == "id-x-trace") {
    kind = puropt::ChannelKind::IdentityTensorTrace;
  } else {
    throw puropt::ValidationError("--kind must be identity, trace or id-x-trace");
  }
  const puropt::GapMode mode =
      mode_name == "sqrt-t" ? puropt::GapMode::SqrtT : puropt::GapMode::SameT;
  if (mode_name != "same-t" && mode_name != "sqrt-t") {
    throw puropt::ValidationError("--mode must be same-t or sqrt-t");
  }
  const TGrid grid = parse_t_grid(grid_text);
  const puropt::SolverKind solver = parse_solver(solver_name);
  const puropt::ExampleChannel example{kind, d};
  const puropt::ChannelRep channel = puropt::make_channel(example);

  std::ostringstream csv;
  csv << "t,o_t_closed,o_t_numeric,joint,product,gap\n";
  char buf[512];
  for (int i = 0; i < grid.steps; ++i) {
    const double t = grid.at(i);
    double closed = std::nan(""), numeric = std::nan("");
    double joint = std::nan(""), product = std::nan(""), gap = std::nan("");
    try {
      closed = puropt::closed_form_fidelity(example, t);
      numeric = puropt::entanglement_fidelity_bounded_purity(channel, t, solver);
    } catch (const puropt::Error&) {
    }
    try {
      const auto g = puropt::multiplicativity_gap(example, example, t, mode, solver);
      joint = g.joint;
      product = g.product;
      gap = g.gap;
    } catch (const puropt::Error&) {
    }
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", t, closed, numeric,
                  joint, product, gap);
    csv << buf;
  }
  write_text_file(out_path, csv.str());
  return 0;
}

int run_tomo(const std::string& input_path, bool equal_purity, const std::string& out_path) {
  const puropt::TomoInput input = puropt::tomo_from_json(read_json_file(input_path));
  const puropt::MeasurementBasis basis = puropt::dual_basis(input.basis);
  const puropt::HermitianOperator h = puropt::linear_inversion(input.frequencies, basis);
  const puropt::MleResult r = equal_purity ? puropt::mle_purity_eq(h, input.t)
                                           : puropt::mle_purity_leq(h, input.t);
  write_text_file(out_path, puropt::matrix_to_json(r.rho.matrix()).dump(2) + "\n");
  json summary{{"distance", r.distance},
               {"purity", r.purity},
               {"scan_k", r.scan_k},
               {"gram_condition", basis.gram_condition}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_bench_cmd(const std::vector<int>& n_values, int samples,
                  const std::vector<std::string>& solver_names, std::uint64_t seed,
                  const std::string& out_path, std::optional<double> fixed_t, bool median_of_3,
                  bool parallel, bool fit) {
  puropt::BenchConfig config;
  config.n_values = n_values;
  config.samples_per_n = samples;
  config.seed = seed;
  config.median_of_3 = median_of_3;
  config.parallel = parallel;
  for (const std::string& name : solver_names) config.solvers.push_back(parse_solver(name));
  if (fixed_t) {
    config.t_policy.kind = puropt::TPolicy::Kind::Fixed;
    config.t_policy.fixed_t = *fixed_t;
  }
  if (!out_path.empty()) config.repro_path = out_path + ".repro.json";

  const std::vector<puropt::BenchRow> rows = puropt::run_bench(config);
  if (out_path.empty()) {
    puropt::write_csv(rows, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw puropt::ValidationError("cannot write " + out_path);
    puropt::write_csv(rows, out);
  }

  if (fit) {
    for (puropt::SolverKind solver : config.solvers) {
      const auto means = puropt::mean_seconds_by_n(rows, solver);
      std::cout << to_string(solver) << " mean seconds per n:";
      for (const auto& [n, mean] : means) std::cout << " " << n << "=" << mean;
      std::cout << "\n";
      for (int degree = 1; degree <= 3; ++degree) {
        if (static_cast<int>(means.size()) <= degree) continue;
        const auto f = puropt::fit_polynomial(means, degree);
        std::cout << "  degree " << degree << " rms residual " << f.rms_residual << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounded-purity simplex optimization toolkit"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "maximize q.p over the bounded-purity simplex");
  std::string q_path, solver_name = "dual", out_path;
  double t = 1.0;
  bool exact_purity = false;
  solve_cmd->add_option("--q", q_path, "objective vector JSON")->required();
  solve_cmd->add_option("--t", t, "purity budget")->required();
  solve_cmd->add_option("--solver", solver_name, "dual|recursive|oracle");
  solve_cmd->add_flag("--exact-purity", exact_purity, "return an optimizer with p.p = t");
  solve_cmd->add_option("--out", out_path, "result JSON path (stdout if omitted)");

  // expect
  auto* expect_cmd = app.add_subcommand("expect", "extremal expectation over bounded purity");
  std::string h_path, expect_solver = "dual";
  double expect_t = 1.0;
  bool min_energy = false, fidelity_target = false;
  expect_cmd->set_help_flag("--help", "print help");  // frees --h
  expect_cmd->add_option("--h", h_path, "Hermitian matrix JSON")->required();
  expect_cmd->add_option("--t", expect_t, "purity budget")->required();
  expect_cmd->add_flag("--min-energy", min_energy, "minimize instead of maximize");
  expect_cmd->add_flag("--fidelity-target", fidelity_target,
                       "treat the matrix as a pure target projector");
  expect_cmd->add_option("--solver", expect_solver, "dual|recursive|oracle");

  // channel
  auto* channel_cmd = app.add_subcommand("channel", "entanglement fidelity grids");
  std::string kind_name, grid_text, mode_name = "same-t", channel_out, channel_solver = "dual";
  int d = 2;
  channel_cmd->add_option("--kind", kind_name, "identity|trace|id-x-trace")->required();
  channel_cmd->add_option("--d", d, "local dimension")->required();
  channel_cmd->add_option("--t-grid", grid_text, "start:stop:steps")->required();
  channel_cmd->add_option("--mode", mode_name, "same-t|sqrt-t");
  channel_cmd->add_option("--out", channel_out, "CSV path")->required();
  channel_cmd->add_option("--solver", channel_solver, "dual|recursive|oracle");

  // tomo
  auto* tomo_cmd = app.add_subcommand("tomo", "purity-constrained tomography reconstruction");
  std::string tomo_in, tomo_out;
  bool equal_purity = false;
  tomo_cmd->add_option("--input", tomo_in, "tomography JSON")->required();
  tomo_cmd->add_flag("--equal-purity", equal_purity, "constrain Tr(rho^2) = t exactly");
  tomo_cmd->add_option("--out", tomo_out, "estimate matrix JSON path")->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "cross-solver timing benchmark");
  std::vector<int> n_values;
  std::vector<std::string> solver_names;
  int samples = 50;
  std::uint64_t seed = 0;
  std::string bench_out;
  double fixed_t_value = 0.0;
  bool median_of_3 = false, parallel = false, fit = false;
  bench_cmd->add_option("--n", n_values, "instance dimensions")->required()->delimiter(',');
  bench_cmd->add_option("--samples", samples, "samples per n")->required();
  bench_cmd->add_option("--solvers", solver_names, "subset of dual,recursive,oracle")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--seed", seed, "RNG seed")->required();
  bench_cmd->add_option("--out", bench_out, "CSV path (stdout if omitted)");
  auto* fixed_t_opt = bench_cmd->add_option("--t", fixed_t_value, "fixed purity budget");
  bench_cmd->add_flag("--median-of-3", median_of_3, "time three repeats, keep the median");
  bench_cmd->add_flag("--parallel", parallel, "parallelize across instances");
  bench_cmd->add_flag("--fit", fit, "print polynomial fit residuals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(q_path, t, solver_name, exact_purity, out_path);
    if (expect_cmd->parsed()) {
      return run_expect(h_path, expect_t, min_energy, fidelity_target, expect_solver);
    }
    if (channel_cmd->parsed()) {
      return run_channel(kind_name, d, grid_text, mode_name, channel_out, channel_solver);
    }
    if (tomo_cmd->parsed()) return run_tomo(tomo_in, equal_purity, tomo_out);
    if (bench_cmd->parsed()) {
      std::optional<double> fixed_t;
      if (fixed_t_opt->count() > 0) fixed_t = fixed_t_value;
      return run_bench_cmd(n_values, samples, solver_names, seed, bench_out, fixed_t,
                           median_of_3, parallel, fit);
    }
  } catch (const puropt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
