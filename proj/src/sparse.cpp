#include "pareto/sparse.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace pareto {

void SparseOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

SparseOperator identity_plus_scaled(const SparseOperator& L, double scale) {
  SparseOperator A = L;
  for (double& v : A.vals) v *= scale;
  for (int i = 0; i < A.n; ++i) A.vals[A.diag[i]] += 1.0;
  return A;
}

void add_to_diagonal(SparseOperator& A, const std::vector<double>& d, double scale) {
  for (int i = 0; i < A.n; ++i) A.vals[A.diag[i]] += scale * d[i];
}

std::vector<double> solve_spd(const SparseOperator& A, const std::vector<double>& b,
                              double tol, int cap, const std::vector<double>* x0) {
  const int n = A.n;
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_spd: size mismatch");
  if (cap <= 0) cap = 10 * n;

  auto dot = [n](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * c[i];
    return s;
  };

  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return std::vector<double>(n, 0.0);

  std::vector<double> x = x0 ? *x0 : std::vector<double>(n, 0.0);
  std::vector<double> r(n), p(n), Ap(n);
  A.apply(x, Ap);
  for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  p = r;
  double rr = dot(r, r);
  const double stop = tol * bnorm;
  if (std::sqrt(rr) <= stop) return x;

  for (int it = 0; it < cap; ++it) {
    A.apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0)
      throw SolverFailure("solve_spd: non-positive curvature, operator is not SPD");
    const double alpha = rr / pAp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    const double rr_new = dot(r, r);
    if (std::sqrt(rr_new) <= stop) return x;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  throw SolverFailure("solve_spd: no convergence in " + std::to_string(cap) + " iterations");
}

}  // namespace pareto
