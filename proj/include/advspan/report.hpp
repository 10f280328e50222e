#pragma once

// Full verification pipeline for one function and its report.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "advspan/error.hpp"
#include "advspan/spanprog.hpp"

namespace advspan {

using Json = nlohmann::ordered_json;

struct PipelineOptions {
  std::string function;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  bool skip_sim = false;
  bool formula_bound = false;
  std::vector<double> c_grid{0.05, 0.1, 0.5, 1.0, 2.0};
  std::vector<double> theta_grid;  // empty: {1/(50W), 0.01, 0.1, 1}
};

/// One asserted inequality or equality. The margin already includes the
/// allowed slack, so the check passes exactly when margin >= 0:
///   "<="  margin = rhs + tol - lhs
///   ">="  margin = lhs - rhs + tol
///   "=="  margin = tol - |lhs - rhs|
struct Check {
  std::string name;
  std::string subject;  // input string, grid label, or "-"
  std::string relation;
  double parameter = 0;
  double lhs = 0;
  double rhs = 0;
  double tol = 0;
  double margin = 0;

  bool pass() const { return margin >= 0.0; }
};

Check make_check(std::string name, std::string subject, std::string relation, double parameter, double lhs,
                 double rhs, double tol);

/// CSV-shaped table; cells are JSON scalars so text, JSON and CSV agree.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Report {
  std::string function;
  Json summary = Json::object();
  std::vector<Check> checks;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  Json span_program;  // canonical program, for --csv-dir

  bool pass() const;
  Json to_json(bool with_timings = false) const;
  std::string to_text(bool with_timings = false) const;
  void write_csv(const std::filesystem::path& dir) const;
};

/// Runs SDP, certificate, canonical program, graphs, lemma checks,
/// simulations and (optionally) the formula bound. Throws Error on input
/// problems and solver failure.
Report run_pipeline(const PipelineOptions& options);

/// 2 for input errors, 3 for solver non-convergence, 1 otherwise.
int exit_code(const Error& e);

// JSON: matrices as nested arrays of [re, im] pairs.
Json matrix_to_json(const Eigen::MatrixXd& m);
Json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXd real_matrix_from_json(const Json& j);

Json span_program_to_json(const SpanProgram<double>& p);
SpanProgram<double> span_program_from_json(const Json& j);
Json canonical_to_json(const CanonicalSpanProgram& p);
CanonicalSpanProgram canonical_from_json(const Json& j);

}  // namespace advspan
