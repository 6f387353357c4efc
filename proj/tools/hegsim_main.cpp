// hegsim: scenario runner and analysis front door.
//
// Subcommands:
//   stability eval   one-row stability table for a single parameter point
//   stability sweep  boundary curve CSV over a u_w grid at fixed p_w_given_d
//   oversight mc     closed-form detection probability vs Monte Carlo
//   protocol run     execute a scenario file and write report files
//   repro paper      run the ten release gates and print a pass/fail table
//
// Exit codes: 0 success, 1 validation or IO failure, 2 a release gate
// failed under `repro paper`.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hegsim/oversight/sampling.hpp"
#include "hegsim/repro/criteria.hpp"
#include "hegsim/scenario/run.hpp"
#include "hegsim/stability/model.hpp"

namespace {

// "a:b:n" -> n evenly spaced points from a to b inclusive.
std::optional<std::vector<double>> parse_grid(const std::string& spec) {
  double a = 0.0, b = 0.0;
  long n = 0;
  char trailing = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &a, &b, &n, &trailing) != 3 ||
      n < 1) {
    return std::nullopt;
  }
  std::vector<double> grid;
  if (n == 1) {
    grid.push_back(a);
    return grid;
  }
  for (long i = 0; i < n; ++i) {
    grid.push_back(a + (b - a) * static_cast<double>(i) /
                           static_cast<double>(n - 1));
  }
  return grid;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("HEGSIM_OUT_DIR")) return env;
  return "hegsim-out";
}

int run_stability_eval(double u_w, double p_doom, double pwd) {
  try {
    const auto rows = hegsim::stability::sweep({u_w}, {p_doom}, {pwd});
    std::cout << hegsim::stability::sweep_csv(rows);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_stability_sweep(double pwd, const std::string& grid_spec) {
  const auto grid = parse_grid(grid_spec);
  if (!grid) {
    std::cerr << "invalid --uw-grid '" << grid_spec << "', expected a:b:n\n";
    return 1;
  }
  try {
    const auto curve = hegsim::stability::boundary_curve(pwd, *grid);
    std::cout << hegsim::stability::boundary_csv(curve);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_oversight_mc(double p, std::uint64_t n, std::size_t trials,
                     std::uint64_t seed) {
  double analytic = 0.0;
  try {
    analytic = hegsim::oversight::detection_probability(p, n);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 1;
  }
  hegsim::oversight::BatchScenario s;
  s.population = n;
  s.compromised = n;
  s.sampling_rate = p;
  s.batches = {n};
  s.customers = 1;
  const double mc = hegsim::oversight::simulate_batch_smuggling(seed, s, trials);
  char line[256];
  std::snprintf(line, sizeof(line), "%.9g,%llu,%zu,%.6f,%.6f,%.6f\n", p,
                static_cast<unsigned long long>(n), trials, analytic, mc,
                mc - analytic);
  std::cout << "p,n,trials,analytic,monte_carlo,difference\n" << line;
  return 0;
}

int run_protocol(const std::string& path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();

  auto parsed = hegsim::scenario::parse_config(text.str());
  if (!parsed.ok()) {
    for (const auto& v : parsed.violations) {
      std::cerr << path << ": " << v.detail << "\n";
    }
    return 1;
  }
  if (seed) parsed.config->seed = *seed;

  const auto report = hegsim::scenario::run_scenario(*parsed.config);
  auto written = hegsim::scenario::emit_report(report, out_dir, format);
  if (!written.ok()) {
    std::cerr << written.error().detail << "\n";
    return 1;
  }
  for (const auto& f : written.value()) std::cout << f << "\n";
  std::cout << "checksum " << hegsim::scenario::report_checksum(report) << "\n";
  return 0;
}

int run_repro() {
  const auto results = hegsim::repro::run_all_criteria();
  bool all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    std::cout << (r.passed ? "PASS" : "FAIL") << " #" << r.index << " "
              << r.name << ": " << r.detail << "\n";
  }
  std::cout << (all_passed ? "all gates passed" : "GATE FAILURE") << " ("
            << results.size() << " gates)\n";
  return all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic governed-hardware simulation lab"};
  app.require_subcommand(1);

  auto* stability = app.add_subcommand("stability", "agreement stability math");
  stability->require_subcommand(1);

  double uw = 0.0, pdoom = 0.0, pwd = 0.0;
  auto* eval = stability->add_subcommand("eval", "one-row stability table");
  eval->add_option("--uw", uw, "winner utility relative to cooperation")
      ->required();
  eval->add_option("--pdoom", pdoom, "chance a race destroys both players")
      ->required();
  eval->add_option("--pwd", pwd, "chance the first defector wins")->required();

  double sweep_pwd = 0.0;
  std::string grid_spec;
  auto* sweep = stability->add_subcommand(
      "sweep", "boundary curve CSV at fixed win chance");
  sweep->add_option("--pwd", sweep_pwd, "chance the first defector wins")
      ->required();
  sweep->add_option("--uw-grid", grid_spec, "u_w grid as a:b:n")->required();

  auto* oversight =
      app.add_subcommand("oversight", "production sampling analysis");
  oversight->require_subcommand(1);
  double mc_p = 0.0;
  std::uint64_t mc_n = 0;
  std::size_t mc_trials = 100000;
  std::uint64_t mc_seed = 1;
  auto* mc = oversight->add_subcommand(
      "mc", "detection probability, closed form vs Monte Carlo");
  mc->add_option("--p", mc_p, "per-device sampling probability")->required();
  mc->add_option("--n", mc_n, "hidden devices")->required();
  mc->add_option("--trials", mc_trials, "Monte Carlo trials");
  mc->add_option("--seed", mc_seed, "Monte Carlo seed");

  auto* protocol = app.add_subcommand("protocol", "scenario execution");
  protocol->require_subcommand(1);
  std::string scenario_path;
  std::uint64_t run_seed = 0;
  std::string out_dir = default_out_dir();
  std::string format = "both";
  auto* run = protocol->add_subcommand("run", "execute a scenario file");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* seed_opt = run->add_option("--seed", run_seed, "override config seed");
  run->add_option("--out", out_dir,
                  "output directory (default $HEGSIM_OUT_DIR or hegsim-out)");
  run->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv", "both"}));

  auto* repro = app.add_subcommand("repro", "release gate suites");
  repro->require_subcommand(1);
  repro->add_subcommand("paper",
                        "run the ten release gates, exit 2 on any failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (eval->parsed()) return run_stability_eval(uw, pdoom, pwd);
  if (sweep->parsed()) return run_stability_sweep(sweep_pwd, grid_spec);
  if (mc->parsed()) return run_oversight_mc(mc_p, mc_n, mc_trials, mc_seed);
  if (run->parsed()) {
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) seed = run_seed;
    return run_protocol(scenario_path, seed, out_dir, format);
  }
  if (repro->parsed()) return run_repro();
  return 1;
}
