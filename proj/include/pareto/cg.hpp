// Optimal-step conjugate gradients over an arbitrary inner-product space.
// The iteration, for a self-adjoint positive definite apply_A and rhs b:
//   g0 = A x0 - b, z0 = g0
//   rho_k   = ||g_k||^2 / <A z_k, z_k>
//   x_{k+1} = x_k - rho_k z_k
//   g_{k+1} = g_k - rho_k A z_k
//   z_{k+1} = g_{k+1} + (||g_{k+1}||^2 / ||g_k||^2) z_k
// stopping on the relative residual ||g_k|| / ||g0|| <= tolerance.
//
// Vec needs copy semantics plus free functions axpy(a, x, y) (y += a x) and
// scale(x, a); the inner product is passed in because the spaces used here
// carry quadrature weights.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "pareto/sparse.hpp"

namespace pareto {

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}
inline void scale(std::vector<double>& x, double a) {
  for (double& v : x) v *= a;
}

struct CgOptions {
  double tolerance = 1e-8;
  int max_iterations = 500;
};

template <class Vec>
struct CgResult {
  Vec x;
  std::vector<double> residual_history;  // relative ||g_k||, one entry per iteration
  int iterations = 0;
  bool converged = false;
};

// observer(k, x_k) fires after every update; pass {} to ignore.
template <class Vec, class Apply, class Dot>
CgResult<Vec> cg_generic(Apply&& apply_A, const Vec& rhs, Vec x0, Dot&& dot,
                         const CgOptions& opts,
                         const std::function<void(int, const Vec&)>& observer = {}) {
  CgResult<Vec> out{std::move(x0), {}, 0, false};

  Vec g = [&] {
    if (dot(out.x, out.x) == 0.0) {
      Vec r = rhs;
      scale(r, -1.0);
      return r;
    }
    Vec r = apply_A(out.x);
    axpy(-1.0, rhs, r);
    return r;
  }();

  double gg = dot(g, g);
  const double g0 = std::sqrt(gg);
  if (g0 == 0.0) {
    out.converged = true;
    return out;
  }

  Vec z = g;
  for (int k = 0; k < opts.max_iterations; ++k) {
    Vec az = apply_A(z);
    const double zaz = dot(z, az);
    if (zaz <= 0.0) throw SolverFailure("cg_generic: operator is not positive definite");
    const double rho = gg / zaz;
    axpy(-rho, z, out.x);
    axpy(-rho, az, g);
    const double gg_new = dot(g, g);
    const double rel = std::sqrt(gg_new) / g0;
    out.residual_history.push_back(rel);
    out.iterations = k + 1;
    if (observer) observer(k + 1, out.x);
    if (rel <= opts.tolerance) {
      out.converged = true;
      return out;
    }
    scale(z, gg_new / gg);
    axpy(1.0, g, z);
    gg = gg_new;
  }
  return out;
}

}  // namespace pareto
