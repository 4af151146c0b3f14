// Runs configured experiments: builds the grid and per-cell problems from an
// ExperimentConfig, executes the (alpha, mu) sweep on a bounded worker pool,
// and renders results as CSV rows, plain-text field dumps and a gnuplot
// script.  Cell order (and therefore CSV row order) is alpha-major in the
// configured list order, independent of the worker count.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pareto/config.hpp"

namespace pareto::experiment {

struct CellResult {
  double alpha = 0;
  double mu = 0;
  SolveReport report;
  bool failed = false;  // the solver threw; `error` holds the message and the
  std::string error;    // CSV row carries nan costs
};

struct FrontResult {
  std::shared_ptr<const Grid> grid;
  std::vector<CellResult> cells;
  std::string csv;  // header plus one row per cell
};

// Column schema shared by every emitter; tests pin it verbatim.
extern const char* const kCsvHeader;

std::shared_ptr<const Grid> make_grid(const config::ExperimentConfig& cfg);

ProblemSpec make_problem(const config::ExperimentConfig& cfg, std::shared_ptr<const Grid> grid,
                         double alpha, double mu);

// Copies the solver block; a configured warm_start file is loaded here.
SolverOptions make_solver_options(const config::ExperimentConfig& cfg, const Grid& g);

// Validates, solves every (alpha, mu) cell, assembles the CSV text.  Per-cell
// solver exceptions are recorded in the cell, never rethrown.
FrontResult run_front(const config::ExperimentConfig& cfg);

std::string csv_row(const config::ExperimentConfig& cfg, const CellResult& cell);

// Plain-text dumps.  Fields: three header lines (lattice dimensions, origin
// and spacing, time stamp) then one value per node in node order.  Controls:
// the same header with a step count, then nt blocks of node values; readable
// back as a warm start.
void write_field_dump(const std::string& path, const Grid& g, double time, const Field& f);
void write_control_dump(const std::string& path, const Grid& g, const TimeGrid& tg,
                        const Control& v);
Control read_control_dump(const std::string& path, const Grid& g, const TimeGrid& tg);

// Front curves (misfit norms, control norm, iteration counts against alpha,
// one curve per mu) rendered from the configured CSV path.
std::string gnuplot_script(const config::ExperimentConfig& cfg);

// Writes everything the output block asks for (CSV, state/control dumps per
// converged cell, plot script); returns the paths written.
std::vector<std::string> write_outputs(const config::ExperimentConfig& cfg,
                                       const FrontResult& fr);

}  // namespace pareto::experiment
