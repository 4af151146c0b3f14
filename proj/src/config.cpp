#include "pareto/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pareto::config {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ConfigError(where + ": " + msg);
}

double parse_double(const std::string& tok, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    fail(where, "expected a number, got '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, const std::string& where) {
  const double v = parse_double(tok, where);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail(where, "expected an integer, got '" + tok + "'");
  return i;
}

bool parse_bool(const std::string& tok, const std::string& where) {
  if (tok == "true" || tok == "yes" || tok == "1") return true;
  if (tok == "false" || tok == "no" || tok == "0") return false;
  fail(where, "expected a boolean, got '" + tok + "'");
}

// Numeric list; each token is either a number or an inclusive range a:s:b.
std::vector<double> parse_values(const std::vector<std::string>& toks, const std::string& where) {
  std::vector<double> out;
  for (const auto& tok : toks) {
    const std::size_t c1 = tok.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double(tok, where));
      continue;
    }
    const std::size_t c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos) fail(where, "range needs the form start:step:end");
    const double a = parse_double(tok.substr(0, c1), where);
    const double s = parse_double(tok.substr(c1 + 1, c2 - c1 - 1), where);
    const double b = parse_double(tok.substr(c2 + 1), where);
    if (!(s > 0) || b < a) fail(where, "range needs step > 0 and end >= start");
    const double slack = 1e-9 * std::max(1.0, std::abs(s));
    for (int i = 0; a + i * s <= b + slack; ++i) out.push_back(a + i * s);
  }
  return out;
}

Shape parse_shape(const std::vector<std::string>& toks, int dim, const std::string& where) {
  if (toks.empty()) fail(where, "empty shape");
  auto num = [&](std::size_t i) { return parse_double(toks[i], where); };
  if (toks[0] == "box") {
    if (static_cast<int>(toks.size()) != 1 + 2 * dim)
      fail(where, "box needs " + std::to_string(2 * dim) + " numbers (lo per axis, hi per axis)");
    BoxShape b;
    for (int a = 0; a < dim; ++a) {
      b.lo[a] = num(1 + a);
      b.hi[a] = num(1 + dim + a);
    }
    return b;
  }
  if (toks[0] == "ball") {
    if (static_cast<int>(toks.size()) != 2 + dim)
      fail(where, "ball needs " + std::to_string(dim) + " center coordinates and a radius");
    BallShape b;
    for (int a = 0; a < dim; ++a) b.center[a] = num(1 + a);
    b.radius = num(1 + dim);
    return b;
  }
  if (toks[0] == "cylinder") {
    if (dim != 3) fail(where, "cylinder shapes are 3-d only");
    if (toks.size() != 4) fail(where, "cylinder needs radius, z lo, z hi");
    return CylinderShape{num(1), num(2), num(3)};
  }
  fail(where, "unknown shape kind '" + toks[0] + "' (box, ball or cylinder)");
}

InitialField parse_field(const std::string& value, const std::string& where) {
  InitialField f;
  const std::size_t star = value.find('*');
  if (star == std::string::npos) {
    f.name = trim(value);
  } else {
    f.name = trim(value.substr(0, star));
    f.factor = parse_double(trim(value.substr(star + 1)), where);
  }
  if (f.name.empty()) fail(where, "empty field name");
  return f;
}

AdmissibleSet parse_admissible(const std::vector<std::string>& toks, const std::string& where) {
  if (toks.empty()) fail(where, "empty admissible set");
  if (toks[0] == "full") {
    if (toks.size() != 1) fail(where, "'full' takes no arguments");
    return FullSpace{};
  }
  if (toks[0] == "ball") {
    if (toks.size() != 2) fail(where, "'ball' needs a radius");
    return L2Ball{parse_double(toks[1], where)};
  }
  if (toks[0] == "box") {
    if (toks.size() != 2) fail(where, "'box' needs a bound");
    return Box{parse_double(toks[1], where)};
  }
  fail(where, "unknown admissible set '" + toks[0] + "' (full, ball <r> or box <r>)");
}

struct Parser {
  ExperimentConfig cfg;
  std::vector<std::string> seen;
  std::string source;

  bool was_seen(const std::string& key) const {
    return std::find(seen.begin(), seen.end(), key) != seen.end();
  }

  void handle(const std::string& section, const std::string& key, const std::string& value,
              const std::string& where) {
    const std::string full = section + "." + key;
    if (was_seen(full)) fail(where, "duplicate key " + full);
    seen.push_back(full);
    const auto toks = split_ws(value);

    if (section == "geometry") {
      if (key == "dim") {
        cfg.geometry.dim = parse_int(value, where);
        if (cfg.geometry.dim < 1 || cfg.geometry.dim > 3) fail(where, "dim must be 1, 2 or 3");
      } else if (key == "bounds") {
        need_dim(where);
        const int d = cfg.geometry.dim;
        if (static_cast<int>(toks.size()) != 2 * d)
          fail(where, "bounds needs " + std::to_string(2 * d) + " numbers (lo per axis, hi per axis)");
        for (int a = 0; a < d; ++a) {
          cfg.geometry.lo[a] = parse_double(toks[a], where);
          cfg.geometry.hi[a] = parse_double(toks[d + a], where);
        }
      } else if (key == "nodes") {
        need_dim(where);
        if (static_cast<int>(toks.size()) != cfg.geometry.dim)
          fail(where, "nodes needs one count per axis");
        for (int a = 0; a < cfg.geometry.dim; ++a)
          cfg.geometry.nodes[a] = parse_int(toks[a], where);
      } else if (key == "domain" || key == "omega" || key == "o1" || key == "o2") {
        need_dim(where);
        Shape s = parse_shape(toks, cfg.geometry.dim, where);
        if (key == "domain") cfg.geometry.domain = s;
        else if (key == "omega") cfg.geometry.omega = s;
        else if (key == "o1") cfg.geometry.o1 = s;
        else cfg.geometry.o2 = s;
      } else {
        fail(where, "unknown geometry key '" + key + "'");
      }
      return;
    }

    if (section == "discretization") {
      if (key == "nodes") {  // alias kept close to the other mesh numbers
        need_dim(where);
        if (static_cast<int>(toks.size()) != cfg.geometry.dim)
          fail(where, "nodes needs one count per axis");
        for (int a = 0; a < cfg.geometry.dim; ++a)
          cfg.geometry.nodes[a] = parse_int(toks[a], where);
      } else if (key == "nt") {
        cfg.time.nt = parse_int(value, where);
      } else if (key == "horizon") {
        cfg.time.horizon = parse_double(value, where);
      } else {
        fail(where, "unknown discretization key '" + key + "'");
      }
      return;
    }

    if (section == "model") {
      if (key == "kind") cfg.model_kind = value;
      else if (key == "reaction") {
        cfg.reaction = value;
        cfg.reaction_set = true;
      } else if (key == "mu") cfg.mu_values = parse_values(toks, where);
      else if (key == "alpha") cfg.alpha_values = parse_values(toks, where);
      else if (key == "admissible") cfg.admissible = parse_admissible(toks, where);
      else fail(where, "unknown model key '" + key + "'");
      return;
    }

    if (section == "initial") {
      if (key == "u0") cfg.u0 = parse_field(value, where);
      else if (key == "u01") cfg.u01 = parse_field(value, where);
      else if (key == "u02") cfg.u02 = parse_field(value, where);
      else fail(where, "unknown initial key '" + key + "'");
      return;
    }

    if (section == "solver") {
      if (key == "algorithm") cfg.algorithm = parse_int(value, where);
      else if (key == "tolerance") cfg.solver.tolerance = parse_double(value, where);
      else if (key == "max_iterations") cfg.solver.max_iterations = parse_int(value, where);
      else if (key == "tau") cfg.solver.tau = parse_double(value, where);
      else if (key == "newton_damping") cfg.solver.newton_damping = parse_bool(value, where);
      else if (key == "newton_terminal") {
        if (value == "weighted") cfg.solver.newton_terminal = NewtonTerminalForm::weighted;
        else if (value == "unweighted") cfg.solver.newton_terminal = NewtonTerminalForm::unweighted;
        else fail(where, "newton_terminal must be 'weighted' or 'unweighted'");
      } else if (key == "warm_start") cfg.warm_start_path = value;
      else fail(where, "unknown solver key '" + key + "'");
      return;
    }

    if (section == "output") {
      if (key == "csv") cfg.csv_path = value;
      else if (key == "prefix") cfg.output_prefix = value;
      else if (key == "dump_final_state") cfg.dump_final_state = parse_bool(value, where);
      else if (key == "dump_control") cfg.dump_control = parse_bool(value, where);
      else if (key == "plot_script") cfg.emit_plot_script = parse_bool(value, where);
      else if (key == "workers") cfg.workers = parse_int(value, where);
      else fail(where, "unknown output key '" + key + "'");
      return;
    }

    fail(where, "unknown section [" + section + "]");
  }

  void need_dim(const std::string& where) const {
    if (!was_seen("geometry.dim"))
      fail(where, "geometry.dim must come before shapes, bounds and node counts");
  }

  void check_required() const {
    static const char* required[] = {"geometry.dim",    "geometry.bounds", "geometry.domain",
                                     "geometry.omega",  "geometry.o1",     "geometry.o2",
                                     "discretization.nt", "discretization.horizon",
                                     "model.kind",      "model.mu",        "model.alpha",
                                     "initial.u01",     "initial.u02",     "solver.algorithm"};
    for (const char* key : required)
      if (!was_seen(key)) fail(source, std::string("missing required key ") + key);
    if (!was_seen("geometry.nodes") && !was_seen("discretization.nodes"))
      fail(source, "missing required key nodes (geometry or discretization section)");
  }
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& name) {
  Parser p;
  p.source = name;
  std::istringstream is(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string where = name + ":" + std::to_string(lineno);
    const std::size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(where, "empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(where, "expected key = value");
    if (section.empty()) fail(where, "key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(where, "empty key");
    if (value.empty()) fail(where, "empty value for key '" + key + "'");
    p.handle(section, key, value, where);
  }
  p.check_required();
  return p.cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

ModelKind ExperimentConfig::model() const {
  if (model_kind == "linear") return LinearModel{};
  if (model_kind == "semilinear")
    return SemilinearModel{reaction == "zero" ? zero_reaction() : sin_reaction()};
  if (model_kind == "bilinear") return BilinearModel{};
  throw ConfigError("model.kind must be linear, semilinear or bilinear (got '" + model_kind +
                    "')");
}

void ExperimentConfig::validate() const {
  const auto bad = [](const std::string& msg) { throw ConfigError(msg); };

  if (geometry.dim < 1 || geometry.dim > 3) bad("geometry.dim must be 1, 2 or 3");
  for (int a = 0; a < geometry.dim; ++a) {
    if (geometry.nodes[a] < 2) bad("nodes must be >= 2 on every used axis");
    if (!(geometry.hi[a] > geometry.lo[a])) bad("geometry.bounds must have hi > lo per axis");
  }
  if (time.nt < 1) bad("discretization.nt must be >= 1");
  if (!(time.horizon > 0)) bad("discretization.horizon must be positive");

  const ModelKind kind = model();  // validates model_kind and the reaction name
  if (reaction_set && model_kind != "semilinear")
    bad("model.reaction only applies to the semilinear model");
  if (reaction != "sine" && reaction != "zero")
    bad("model.reaction must be 'sine' or 'zero' (got '" + reaction + "')");

  if (mu_values.empty()) bad("model.mu list is empty");
  for (double mu : mu_values)
    if (!(mu > 0)) bad("model.mu values must be positive (the mu = 0 regime is unsupported)");
  if (alpha_values.empty()) bad("model.alpha list is empty");
  for (double a : alpha_values)
    if (!(a >= 0 && a <= 1)) bad("model.alpha values must lie in [0,1]");

  if (const auto* ball = std::get_if<L2Ball>(&admissible)) {
    if (!(ball->radius > 0)) bad("admissible ball radius must be positive");
  } else if (const auto* box = std::get_if<Box>(&admissible)) {
    if (!(box->bound > 0)) bad("admissible box bound must be positive");
  }

  if (algorithm < 1 || algorithm > 6) bad("solver.algorithm must be between 1 and 6");
  if (!algorithm_matches_model(algorithm, kind))
    bad("solver.algorithm " + std::to_string(algorithm) + " does not apply to the " + model_kind +
        " model (1,2: linear; 3,4: semilinear; 5,6: bilinear)");
  if ((algorithm == 5 || algorithm == 6) && !std::holds_alternative<Box>(admissible))
    bad("the bilinear solvers need 'admissible = box <bound>'");
  if (!(solver.tolerance > 0)) bad("solver.tolerance must be positive");
  if (solver.max_iterations < 1) bad("solver.max_iterations must be >= 1");
  if (solver.tau && !(*solver.tau > 0)) bad("solver.tau must be positive");

  for (const InitialField* f : {&u0, &u01, &u02}) {
    if (f->name.empty()) bad("initial data names u01 and u02 are required");
    if (!known_field_name(f->name))
      bad("unknown initial field '" + f->name +
          "' (zero, peak, well, ripple, sine, peak_slope_z, well_slope_z)");
    if (!std::isfinite(f->factor)) bad("initial field factor must be finite");
    if ((f->name == "peak_slope_z" || f->name == "well_slope_z") && geometry.dim != 3)
      bad("field '" + f->name + "' is 3-d only");
  }

  if (workers < 1) bad("output.workers must be >= 1");
  if (emit_plot_script && csv_path.empty()) bad("output.plot_script needs output.csv");
}

bool known_field_name(const std::string& name) {
  static const char* names[] = {"zero", "peak",         "well",        "ripple",
                                "sine", "peak_slope_z", "well_slope_z"};
  for (const char* n : names)
    if (name == n) return true;
  return false;
}

Field make_named_field(const Grid& g, const InitialField& f) {
  const int dim = g.dim;
  auto radius = [dim](double x, double y, double z) {
    double r2 = x * x;
    if (dim >= 2) r2 += y * y;
    if (dim >= 3) r2 += z * z;
    return std::sqrt(r2);
  };

  const double c = f.factor;
  if (f.name == "zero") return zero_field(g);
  if (f.name == "peak")
    return field_from_function(g, [&](double x, double y, double z) {
      return c * (3.0 - radius(x, y, z));
    });
  if (f.name == "well")
    return field_from_function(g, [&](double x, double y, double z) {
      return c * (radius(x, y, z) - 3.0);
    });
  if (f.name == "ripple")
    return field_from_function(g, [&](double x, double y, double z) {
      const double rxy = std::sqrt(x * x + (dim >= 2 ? y * y : 0.0));
      if (dim == 1) return c * x * x * x * std::sin(2.0 * kPi / 3.0 * rxy);
      if (dim == 2) return c * x * x * x * y * y * y * std::sin(2.0 * kPi / 3.0 * rxy);
      return c * x * x * x * y * y * y * z * z * std::sin(2.0 * kPi / 3.0 * z * rxy);
    });
  if (f.name == "sine")
    return field_from_function(g, [&](double x, double y, double z) {
      double v = std::sin(kPi * x);
      if (dim >= 2) v *= std::sin(kPi * y);
      if (dim >= 3) v *= std::sin(kPi * z);
      return c * v;
    });
  if (f.name == "peak_slope_z" || f.name == "well_slope_z") {
    if (dim != 3) throw ConfigError("field '" + f.name + "' is 3-d only");
    const double sgn = f.name == "peak_slope_z" ? 1.0 : -1.0;
    return field_from_function(g, [&](double x, double y, double z) {
      return c * sgn * (3.0 - std::sqrt(x * x + y * y)) * z;
    });
  }
  throw ConfigError("unknown initial field '" + f.name + "'");
}

namespace {

// Shared geometry of the 2-d presets: disc of radius 3, control strip above
// the x-axis, two observation boxes overlapping around x = 0.
constexpr const char* kGeo2d =
    "[geometry]\n"
    "dim = 2\n"
    "bounds = -3 -3 3 3\n"
    "nodes = 48 48\n"
    "domain = ball 0 0 3\n"
    "omega = box -1.5 0 1.5 1.5\n"
    "o1 = box -1.5 0 0.3 1.5\n"
    "o2 = box -0.3 0 1.5 1.5\n"
    "\n"
    "[discretization]\n"
    "nt = 64\n"
    "horizon = 0.5\n";

constexpr const char* kGeo3d =
    "[geometry]\n"
    "dim = 3\n"
    "bounds = -3 -3 0 3 3 3\n"
    "nodes = 24 24 16\n"
    "domain = cylinder 3 0 3\n"
    "omega = box -1.5 0 0 1.5 1.5 3\n"
    "o1 = box -1.5 0 0 0.3 1.5 3\n"
    "o2 = box -0.3 0 0 1.5 1.5 3\n"
    "\n"
    "[discretization]\n"
    "nt = 32\n"
    "horizon = 0.5\n";

// Full-resolution variants of the same geometries, selected by
// `presets show <name> --full`.  These are meant for overnight runs and are
// not exercised by the test suite.
constexpr const char* kGeo2dFull =
    "[geometry]\n"
    "dim = 2\n"
    "bounds = -3 -3 3 3\n"
    "nodes = 192 192\n"
    "domain = ball 0 0 3\n"
    "omega = box -1.5 0 1.5 1.5\n"
    "o1 = box -1.5 0 0.3 1.5\n"
    "o2 = box -0.3 0 1.5 1.5\n"
    "\n"
    "[discretization]\n"
    "nt = 128\n"
    "horizon = 0.5\n";

constexpr const char* kGeo3dFull =
    "[geometry]\n"
    "dim = 3\n"
    "bounds = -3 -3 0 3 3 3\n"
    "nodes = 96 96 64\n"
    "domain = cylinder 3 0 3\n"
    "omega = box -1.5 0 0 1.5 1.5 3\n"
    "o1 = box -1.5 0 0 0.3 1.5 3\n"
    "o2 = box -0.3 0 0 1.5 1.5 3\n"
    "\n"
    "[discretization]\n"
    "nt = 96\n"
    "horizon = 0.5\n";

struct Preset {
  const char* name;
  const char* comment;
  const char* geo;
  const char* geo_full;
  const char* rest;
};

const Preset kPresets[] = {
    {"test1", "# Linear model, 2-d disc, conjugate-gradient front sweep\n", kGeo2d, kGeo2dFull,
     "[model]\n"
     "kind = linear\n"
     "mu = 1 5 10\n"
     "alpha = 0.05:0.05:0.95\n"
     "\n"
     "[initial]\n"
     "u0 = zero\n"
     "u01 = peak\n"
     "u02 = well\n"
     "\n"
     "[solver]\n"
     "algorithm = 2\n"
     "tolerance = 1e-8\n"
     "\n"
     "[output]\n"
     "csv = test1.csv\n"
     "prefix = test1\n"
     "plot_script = true\n"},
    {"test2", "# Linear model, 3-d cylinder, conjugate-gradient front sweep\n", kGeo3d, kGeo3dFull,
     "[model]\n"
     "kind = linear\n"
     "mu = 1 5 10\n"
     "alpha = 0.05:0.05:0.95\n"
     "\n"
     "[initial]\n"
     "u0 = zero\n"
     "u01 = peak\n"
     "u02 = well\n"
     "\n"
     "[solver]\n"
     "algorithm = 2\n"
     "tolerance = 1e-8\n"
     "\n"
     "[output]\n"
     "csv = test2.csv\n"
     "prefix = test2\n"
     "plot_script = true\n"},
    {"test3", "# Semilinear model F(s) = s (1 + sin s), 2-d disc, fixed-point sweep\n", kGeo2d, kGeo2dFull,
     "[model]\n"
     "kind = semilinear\n"
     "reaction = sine\n"
     "mu = 1 5 10\n"
     "alpha = 0.05:0.05:0.95\n"
     "\n"
     "[initial]\n"
     "u0 = zero\n"
     "u01 = peak\n"
     "u02 = well\n"
     "\n"
     "[solver]\n"
     "algorithm = 3\n"
     "tolerance = 1e-8\n"
     "\n"
     "[output]\n"
     "csv = test3.csv\n"
     "prefix = test3\n"
     "plot_script = true\n"},
    {"test4", "# Semilinear model F(s) = s (1 + sin s), 3-d cylinder, fixed-point sweep\n",
     kGeo3d, kGeo3dFull,
     "[model]\n"
     "kind = semilinear\n"
     "reaction = sine\n"
     "mu = 1 5 10\n"
     "alpha = 0.05:0.05:0.95\n"
     "\n"
     "[initial]\n"
     "u0 = zero\n"
     "u01 = peak\n"
     "u02 = well\n"
     "\n"
     "[solver]\n"
     "algorithm = 3\n"
     "tolerance = 1e-8\n"
     "\n"
     "[output]\n"
     "csv = test4.csv\n"
     "prefix = test4\n"
     "plot_script = true\n"},
    {"test5", "# Bilinear model, 2-d disc, projected gradient descent\n", kGeo2d, kGeo2dFull,
     "[model]\n"
     "kind = bilinear\n"
     "mu = 1 5 10\n"
     "alpha = 0.05:0.05:0.95\n"
     "admissible = box 20\n"
     "\n"
     "[initial]\n"
     "u0 = ripple * 0.02\n"
     "u01 = peak\n"
     "u02 = well\n"
     "\n"
     "[solver]\n"
     "algorithm = 5\n"
     "tolerance = 1e-8\n"
     "\n"
     "[output]\n"
     "csv = test5.csv\n"
     "prefix = test5\n"
     "plot_script = true\n"},
    {"test6", "# Bilinear model, 3-d cylinder, pointwise fixed point\n", kGeo3d, kGeo3dFull,
     "[model]\n"
     "kind = bilinear\n"
     "mu = 1 5 10\n"
     "alpha = 0.05:0.05:0.95\n"
     "admissible = box 20\n"
     "\n"
     "[initial]\n"
     "u0 = ripple * 0.005\n"
     "u01 = peak_slope_z\n"
     "u02 = well_slope_z\n"
     "\n"
     "[solver]\n"
     "algorithm = 6\n"
     "tolerance = 1e-8\n"
     "\n"
     "[output]\n"
     "csv = test6.csv\n"
     "prefix = test6\n"
     "plot_script = true\n"},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.push_back(p.name);
  return names;
}

std::string preset_text(const std::string& name, bool full_resolution) {
  for (const auto& p : kPresets)
    if (name == p.name)
      return std::string(p.comment) + (full_resolution ? p.geo_full : p.geo) + "\n" + p.rest;
  throw ConfigError("unknown preset '" + name + "' (see 'presets list')");
}

ExperimentConfig preset(const std::string& name, bool full_resolution) {
  ExperimentConfig cfg =
      parse_config_text(preset_text(name, full_resolution), "preset:" + name);
  cfg.validate();
  return cfg;
}

}  // namespace pareto::config
