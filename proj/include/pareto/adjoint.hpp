// Discrete adjoints: exact transposes of the implicit-Euler forward maps.
//
// Index conventions (single source of truth for every gradient in this
// code base).  Write S = (I + dt A)^{-1}.  The forward schemes are
//   linear      u^{n+1} = S (u^n + dt v^{n+1} 1w)
//   semilinear  u^{n+1} = S (u^n - dt F(u^n) + dt v^{n+1} 1w)
//   bilinear    u^{n+1} = S_n u^n,  S_n = (I + dt A + dt diag(v^{n+1} 1w))^{-1}
// with 1w the omega indicator.  Differentiating a terminal cost j(u^{nt})
// and pulling the sensitivity p^{nt} = grad j(u^{nt}) backwards gives the
// transposed recursions
//   linear      p^n = S p^{n+1}
//   semilinear  p^n = (I - dt F'(u^n)) S p^{n+1}
//   bilinear    p^n = S_n p^{n+1}
// (S is symmetric, so "transpose" costs one more solve of the same kind).
//
// The solvers below return the trajectory phi with
//   phi^{nt}   = terminal field,
//   phi^{m-1}  = the field that pairs with the control at level m, i.e.
//     linear/bilinear  phi^{m-1} = p^{m-1}
//     semilinear       phi^{m-1} = S p^m   (the half step before the
//                       explicit reaction factor (I - dt F'(u^{m-1})) lands)
// With that convention the exact discrete derivatives of the tracking cost are
//   linear/semilinear  d j / d v^m = dt * w * phi^{m-1}            on omega
//   bilinear           d j / d v^m = dt * w * (-phi^{m-1} u^m)     on omega
// per node of weight w, i.e. the gradient representative in the weighted
// space-time inner product is phi^{m-1}|w (resp. -(phi^{m-1} u^m)|w).  The
// staggering (control level m against adjoint level m-1) is what makes the
// duality  <u_v(T), q> = sum_m dt (v^m, phi^{m-1})_omega  exact to rounding.
#pragma once

#include "pareto/models.hpp"

namespace pareto {

// Blended terminal data for the pair of tracking objectives:
//   w_alpha = alpha 1_{O1} + (1-alpha) 1_{O2}
//   g_alpha = alpha u1T 1_{O1} + (1-alpha) u2T 1_{O2}
// misfit(uT) = w_alpha uT - g_alpha covers the single-objective adjoints
// (alpha = 1 or 0) and the blended ones through one code path.
struct TerminalWeight {
  double alpha = 0.5;
  Field w;  // 0 <= w <= 1, supported on O1 union O2
  Field g;  // supported on O1 union O2
};

TerminalWeight make_terminal_weight(const Grid& grid, double alpha, const Field& u1T,
                                    const Field& u2T);
Field terminal_misfit(const Grid& grid, const TerminalWeight& tw, const Field& uT);

Trajectory adjoint_linear(const Grid& g, const TimeGrid& tg, const Field& terminal,
                          const StepperOptions& opts = {});

// state: the forward trajectory the linearization is taken at.
Trajectory adjoint_semilinear(const Grid& g, const TimeGrid& tg, const Trajectory& state,
                              const Field& terminal, const Reaction& f,
                              const StepperOptions& opts = {});

// v: the control the forward step operators were built from.
Trajectory adjoint_bilinear(const Grid& g, const TimeGrid& tg, const Control& v,
                            const Field& terminal, const StepperOptions& opts = {});

}  // namespace pareto
