#include "pareto/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pareto::experiment {
namespace {

std::string fmt_full(double x) {  // round-trip exact
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {  // for filenames and plot titles
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string dump_header(const Grid& g, double time, int steps) {
  std::ostringstream os;
  os << "dims " << g.dim << " " << g.n[0] << " " << g.n[1] << " " << g.n[2];
  if (steps > 0) os << " steps " << steps;
  os << "\n";
  os << "grid " << fmt_full(g.lo[0]) << " " << fmt_full(g.lo[1]) << " " << fmt_full(g.lo[2])
     << " " << fmt_full(g.spacing[0]) << " " << fmt_full(g.spacing[1]) << " "
     << fmt_full(g.spacing[2]) << "\n";
  os << "time " << fmt_full(time) << "\n";
  return os.str();
}

}  // namespace

const char* const kCsvHeader =
    "alpha,mu,model,algorithm,J1,J2,norm_u_minus_u1,norm_u_minus_u2,norm_v,iterations,"
    "converged,residual,wall_ms";

std::shared_ptr<const Grid> make_grid(const config::ExperimentConfig& cfg) {
  return std::make_shared<const Grid>(build_grid(cfg.geometry));
}

ProblemSpec make_problem(const config::ExperimentConfig& cfg, std::shared_ptr<const Grid> grid,
                         double alpha, double mu) {
  ProblemSpec spec;
  spec.grid = std::move(grid);
  spec.time = cfg.time;
  spec.model = cfg.model();
  spec.mu = mu;
  spec.alpha = alpha;
  spec.u0 = config::make_named_field(*spec.grid, cfg.u0);
  spec.u01 = config::make_named_field(*spec.grid, cfg.u01);
  spec.u02 = config::make_named_field(*spec.grid, cfg.u02);
  spec.admissible = cfg.admissible;
  return spec;
}

SolverOptions make_solver_options(const config::ExperimentConfig& cfg, const Grid& g) {
  SolverOptions opts = cfg.solver;
  if (!cfg.warm_start_path.empty())
    opts.initial_control = read_control_dump(cfg.warm_start_path, g, cfg.time);
  return opts;
}

std::string csv_row(const config::ExperimentConfig& cfg, const CellResult& cell) {
  const double nan = std::nan("");
  const SolveReport& r = cell.report;
  std::ostringstream os;
  os << fmt_full(cell.alpha) << "," << fmt_full(cell.mu) << "," << cfg.model_kind << ","
     << (cell.failed ? cfg.algorithm : r.algorithm_id) << ","
     << fmt_full(cell.failed ? nan : r.costs.j1) << ","
     << fmt_full(cell.failed ? nan : r.costs.j2) << ","
     << fmt_full(cell.failed ? nan : r.costs.track1) << ","
     << fmt_full(cell.failed ? nan : r.costs.track2) << ","
     << fmt_full(cell.failed ? nan : r.costs.control_norm) << ","
     << (cell.failed ? 0 : r.iterations) << "," << (!cell.failed && r.converged ? 1 : 0) << ","
     << fmt_full(cell.failed ? nan : r.final_residual()) << ",";
  char wall[40];
  std::snprintf(wall, sizeof wall, "%.3f", cell.failed ? nan : r.wall_seconds * 1000.0);
  os << wall;
  return os.str();
}

FrontResult run_front(const config::ExperimentConfig& cfg) {
  cfg.validate();
  FrontResult fr;
  fr.grid = make_grid(cfg);
  const SolverOptions opts = make_solver_options(cfg, *fr.grid);

  for (double alpha : cfg.alpha_values)
    for (double mu : cfg.mu_values) {
      CellResult cell;
      cell.alpha = alpha;
      cell.mu = mu;
      fr.cells.push_back(std::move(cell));
    }

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= fr.cells.size()) return;
      CellResult& cell = fr.cells[i];
      try {
        const ProblemSpec spec = make_problem(cfg, fr.grid, cell.alpha, cell.mu);
        cell.report = solve_with_algorithm(cfg.algorithm, spec, opts);
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(cfg.workers, static_cast<int>(fr.cells.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << kCsvHeader << "\n";
  for (const auto& cell : fr.cells) csv << csv_row(cfg, cell) << "\n";
  fr.csv = csv.str();
  return fr;
}

void write_field_dump(const std::string& path, const Grid& g, double time, const Field& f) {
  if (static_cast<int>(f.size()) != g.num_nodes())
    throw std::invalid_argument("write_field_dump: field does not match grid");
  std::ostringstream os;
  os << dump_header(g, time, 0);
  for (double v : f) os << fmt_full(v) << "\n";
  write_text_file(path, os.str());
}

void write_control_dump(const std::string& path, const Grid& g, const TimeGrid& tg,
                        const Control& v) {
  if (v.nt() != tg.nt) throw std::invalid_argument("write_control_dump: step count mismatch");
  std::ostringstream os;
  os << dump_header(g, tg.horizon, tg.nt);
  for (const auto& step : v.steps) {
    if (static_cast<int>(step.size()) != g.num_nodes())
      throw std::invalid_argument("write_control_dump: control does not match grid");
    for (double x : step) os << fmt_full(x) << "\n";
  }
  write_text_file(path, os.str());
}

Control read_control_dump(const std::string& path, const Grid& g, const TimeGrid& tg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open control file: " + path);
  auto bad = [&](const std::string& msg) {
    throw std::runtime_error(path + ": " + msg);
  };

  std::string word;
  int dim = 0, nx = 0, ny = 0, nz = 0, steps = 0;
  if (!(in >> word) || word != "dims") bad("expected 'dims' header");
  in >> dim >> nx >> ny >> nz;
  if (!(in >> word) || word != "steps") bad("not a control dump (missing step count)");
  in >> steps;
  if (dim != g.dim || nx != g.n[0] || ny != g.n[1] || nz != g.n[2])
    bad("lattice does not match the configured grid");
  if (steps != tg.nt) bad("step count does not match the configured time grid");

  double skip;
  if (!(in >> word) || word != "grid") bad("expected 'grid' header");
  for (int i = 0; i < 6; ++i) in >> skip;
  if (!(in >> word) || word != "time") bad("expected 'time' header");
  in >> skip;
  if (!in) bad("truncated header");

  Control v = zero_control(g, tg);
  for (auto& step : v.steps)
    for (double& x : step)
      if (!(in >> x)) bad("truncated values");
  return v;
}

std::string gnuplot_script(const config::ExperimentConfig& cfg) {
  const std::string& csv = cfg.csv_path;
  std::ostringstream os;
  os << "# Front curves rendered from " << csv << "\n"
     << "set datafile separator \",\"\n"
     << "set grid\n"
     << "set key outside\n"
     << "set xlabel \"alpha\"\n"
     << "set terminal pngcairo size 960,640\n";

  auto curves = [&](int column, const std::string& label) {
    std::string sep = "plot ";
    for (double mu : cfg.mu_values) {
      const std::string m = fmt_short(mu);
      os << sep << "\"" << csv << "\" using 1:(abs($2-" << m << ")<1e-12?$" << column
         << ":1/0) with linespoints title \"" << label << ", mu=" << m << "\"";
      sep = ", \\\n     ";
    }
    os << "\n";
  };

  os << "set output \"" << cfg.output_prefix << "_misfits.png\"\n"
     << "set ylabel \"terminal misfit norms\"\n";
  std::string sep = "plot ";
  for (int column : {7, 8})
    for (double mu : cfg.mu_values) {
      const std::string m = fmt_short(mu);
      os << sep << "\"" << csv << "\" using 1:(abs($2-" << m << ")<1e-12?$" << column
         << ":1/0) with linespoints title \"" << (column == 7 ? "|u-u1|" : "|u-u2|")
         << ", mu=" << m << "\"";
      sep = ", \\\n     ";
    }
  os << "\n";

  os << "set output \"" << cfg.output_prefix << "_control.png\"\n"
     << "set ylabel \"control norm\"\n";
  curves(9, "|v|");

  os << "set output \"" << cfg.output_prefix << "_iterations.png\"\n"
     << "set ylabel \"iterations\"\n";
  curves(10, "iterations");

  return os.str();
}

std::vector<std::string> write_outputs(const config::ExperimentConfig& cfg,
                                       const FrontResult& fr) {
  std::vector<std::string> written;

  if (!cfg.csv_path.empty()) {
    write_text_file(cfg.csv_path, fr.csv);
    written.push_back(cfg.csv_path);
  }

  if (cfg.dump_final_state || cfg.dump_control) {
    for (const auto& cell : fr.cells) {
      if (cell.failed) continue;
      const std::string stem =
          cfg.output_prefix + "_alpha" + fmt_short(cell.alpha) + "_mu" + fmt_short(cell.mu);
      if (cfg.dump_final_state) {
        const ProblemSpec spec = make_problem(cfg, fr.grid, cell.alpha, cell.mu);
        const Trajectory u = forward_model(*fr.grid, cfg.time, spec.model, spec.u0,
                                           cell.report.control, spec.stepper);
        write_field_dump(stem + ".state", *fr.grid, cfg.time.horizon, u.final_state());
        written.push_back(stem + ".state");
      }
      if (cfg.dump_control) {
        write_control_dump(stem + ".control", *fr.grid, cfg.time, cell.report.control);
        written.push_back(stem + ".control");
      }
    }
  }

  if (cfg.emit_plot_script) {
    const std::string path = cfg.output_prefix + "_plots.gp";
    write_text_file(path, gnuplot_script(cfg));
    written.push_back(path);
  }
  return written;
}

}  // namespace pareto::experiment
