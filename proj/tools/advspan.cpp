// advspan: adversary-bound and span-program verification for small boolean
// functions.
//
//   advspan verify --function PARITY:2 [--json out.json] [--csv-dir dir] ...
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 the SDP
// solver did not converge.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "advspan/report.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw advspan::Error(advspan::Errc::BadSpec, std::string(flag) + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw advspan::Error(advspan::Errc::BadSpec, std::string(flag) + " is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversary bound, canonical span program and spectral verification"};
  app.require_subcommand(1);
  CLI::App* verify = app.add_subcommand("verify", "run the full pipeline on one function");

  advspan::PipelineOptions opts;
  std::string json_path, csv_dir, c_grid, theta_grid;
  bool timings = false;
  verify->add_option("--function", opts.function, "OR:n, AND:n, PARITY:n, MAJ:n or a truth table like 0110")
      ->required();
  verify->add_option("--tol", opts.tol, "SDP tolerance")->capture_default_str();
  verify->add_option("--seed", opts.seed, "seed for the randomized property checks")->capture_default_str();
  verify->add_flag("--skip-sim", opts.skip_sim, "skip the algorithm simulations");
  verify->add_flag("--formula-bound", opts.formula_bound, "check ADV <= sqrt(formula size)");
  verify->add_option("--json", json_path, "write the JSON report here");
  verify->add_option("--csv-dir", csv_dir, "write CSV tables, the span program and graph edges here");
  verify->add_option("--c-grid", c_grid, "comma list of c for the effective-gap check");
  verify->add_option("--theta-grid", theta_grid, "comma list of Theta for the phase-gap check");
  verify->add_flag("--timings", timings, "include per-stage wall-clock times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!c_grid.empty()) opts.c_grid = parse_grid(c_grid, "--c-grid");
    if (!theta_grid.empty()) opts.theta_grid = parse_grid(theta_grid, "--theta-grid");
    const advspan::Report report = advspan::run_pipeline(opts);
    std::cout << report.to_text(timings);
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) throw advspan::Error(advspan::Errc::BadSpec, "cannot write " + json_path);
      out << report.to_json(timings).dump(2) << '\n';
    }
    if (!csv_dir.empty()) report.write_csv(csv_dir);
    return report.pass() ? 0 : 1;
  } catch (const advspan::Error& e) {
    std::cerr << "advspan: " << e.what() << '\n';
    return advspan::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "advspan: " << e.what() << '\n';
    return 1;
  }
}
