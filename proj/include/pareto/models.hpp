// Implicit-Euler time stepping for the three controlled heat models:
//   linear      (I + dt A) u^{n+1} = u^n + dt v^{n+1} 1_omega
//   semilinear  (I + dt A) u^{n+1} = u^n - dt F(u^n) + dt v^{n+1} 1_omega
//   bilinear    (I + dt A + dt diag(v^{n+1} 1_omega)) u^{n+1} = u^n
// A is the masked -Laplacian; the control is indexed at the right endpoint of
// each time slab (steps[m-1] drives step m).
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <variant>

#include "pareto/grid.hpp"

namespace pareto {

// Reaction term F with its first two derivatives.  deriv_clamp optionally
// saturates F' at +-deriv_clamp inside linearizations (off by default; note
// that a finite clamp makes the computed gradients inexact by design).
struct Reaction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second_deriv;
  double deriv_clamp = std::numeric_limits<double>::infinity();

  double clamped_deriv(double s) const {
    const double d = deriv(s);
    if (d > deriv_clamp) return deriv_clamp;
    if (d < -deriv_clamp) return -deriv_clamp;
    return d;
  }
};

// F(s) = s (1 + sin s), the reaction used by the semilinear experiments.
Reaction sin_reaction();
Reaction zero_reaction();

// Spot-checks F' and F'' against centered differences of F at a few sample
// points; throws std::invalid_argument on disagreement.
void check_reaction_consistency(const Reaction& f, double tol = 1e-5);

struct LinearModel {};
struct SemilinearModel {
  Reaction f;
};
struct BilinearModel {};
using ModelKind = std::variant<LinearModel, SemilinearModel, BilinearModel>;

struct Trajectory {
  std::vector<Field> levels;  // nt+1 fields, levels[n] = time n*dt
  const Field& final_state() const { return levels.back(); }
  int nt() const { return static_cast<int>(levels.size()) - 1; }
};

struct StepperOptions {
  double linear_tol = 1e-10;  // relative tolerance of the inner CG solves
  int cap_factor = 10;        // iteration cap = cap_factor * unknowns
};

Trajectory forward_linear(const Grid& g, const TimeGrid& tg, const Field& u0,
                          const Control& v, const StepperOptions& opts = {});

Trajectory forward_semilinear(const Grid& g, const TimeGrid& tg, const Field& u0,
                              const Control& v, const Reaction& f,
                              const StepperOptions& opts = {});

// Throws SolverFailure naming the offending time level when the step operator
// loses positive definiteness (needs 1 + dt*min(v) > 0 on omega).
Trajectory forward_bilinear(const Grid& g, const TimeGrid& tg, const Field& u0,
                            const Control& v, const StepperOptions& opts = {});

// Dispatch on the model kind (semilinear pulls its reaction from the variant).
Trajectory forward_model(const Grid& g, const TimeGrid& tg, const ModelKind& model,
                         const Field& u0, const Control& v, const StepperOptions& opts = {});

}  // namespace pareto
