// Experiment configuration: a small sectioned key-value text format, a fixed
// catalogue of named initial-data fields, and the built-in desk-scale presets
// test1..test6 (one per model and dimension).
//
// Grammar, line oriented:
//   # comment                (also after values)
//   [section]                geometry | discretization | model | initial |
//                            solver | output
//   key = value              value split on whitespace; numeric lists may use
//                            start:step:end range shorthand (inclusive)
// Shapes:   box lo... hi...  |  ball center... radius  |  cylinder radius zlo zhi
// Fields:   zero | peak | well | ripple | sine | peak_slope_z | well_slope_z,
//           optionally scaled as  name * factor
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pareto/algorithms.hpp"

namespace pareto::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialField {
  std::string name;
  double factor = 1.0;
};

struct ExperimentConfig {
  // [geometry]  dim, bounds (lo per axis then hi per axis), domain, omega, o1, o2
  GeometrySpec geometry;

  // [discretization]  nodes (per axis), nt, horizon
  TimeGrid time{0.5, 64};

  // [model]  kind, reaction (semilinear only), mu, alpha, admissible
  std::string model_kind;
  std::string reaction = "sine";
  bool reaction_set = false;
  std::vector<double> mu_values;
  std::vector<double> alpha_values;
  AdmissibleSet admissible = FullSpace{};

  // [initial]  u0, u01, u02
  InitialField u0{"zero", 1.0}, u01, u02;

  // [solver]  algorithm, tolerance, max_iterations, tau, newton_damping,
  //           newton_terminal, warm_start
  int algorithm = 0;
  SolverOptions solver;
  std::string warm_start_path;

  // [output]  csv, prefix, dump_final_state, dump_control, plot_script, workers
  std::string csv_path;
  std::string output_prefix = "run";
  bool dump_final_state = false;
  bool dump_control = false;
  bool emit_plot_script = false;
  int workers = 1;

  ModelKind model() const;  // builds the variant, resolving the reaction name

  // Semantic checks (ranges, catalogue membership, algorithm/model pairing).
  // Throws ConfigError; syntax errors are reported by the parser with
  // file:line positions instead.
  void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& name);
ExperimentConfig parse_config_file(const std::string& path);

bool known_field_name(const std::string& name);

// Evaluates a catalogue entry on the grid (zero outside the domain mask).
Field make_named_field(const Grid& g, const InitialField& f);

// Built-in experiment presets.  The full-resolution variants share the same
// physics and solver settings on a much finer grid; they are intended for
// long unattended runs and carry no runtime guarantees.
std::vector<std::string> preset_names();
// Throws ConfigError on unknown names.
std::string preset_text(const std::string& name, bool full_resolution = false);
ExperimentConfig preset(const std::string& name, bool full_resolution = false);

}  // namespace pareto::config
