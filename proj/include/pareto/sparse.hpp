// Compressed-row symmetric operators and the conjugate-gradient solve used by
// every implicit time step.
#pragma once

#include <stdexcept>
#include <vector>

namespace pareto {

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SparseOperator {
  int n = 0;
  std::vector<int> row_ptr;   // size n+1
  std::vector<int> cols;      // column indices, ascending within a row
  std::vector<double> vals;
  std::vector<int> diag;      // index of the diagonal entry of each row in vals

  void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

// I + scale * L  (same sparsity as L; L must carry explicit diagonal entries).
SparseOperator identity_plus_scaled(const SparseOperator& L, double scale);

// A.vals[diag[i]] += scale * d[i]
void add_to_diagonal(SparseOperator& A, const std::vector<double>& d, double scale);

// Plain conjugate gradients for SPD systems.  Relative residual tolerance,
// iteration cap 10*n by default (cap <= 0).  x0, when given, seeds the
// iteration (used to warm-start consecutive time steps).  Throws SolverFailure
// if the cap is hit or a search direction has non-positive curvature.
std::vector<double> solve_spd(const SparseOperator& A, const std::vector<double>& b,
                              double tol = 1e-10, int cap = 0,
                              const std::vector<double>* x0 = nullptr);

}  // namespace pareto
