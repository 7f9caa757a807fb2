#pragma once

#include <vector>

namespace liouville {

// Symmetric tridiagonal matrix given by diag (n) and off (n-1).
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;
  int n() const { return int(diag.size()); }
};

// Solve (T - sigma I) x = b with partial pivoting (stable near eigenvalues).
std::vector<double> tridiag_solve_shifted(const Tridiag& T, double sigma,
                                          const std::vector<double>& b);

// Number of eigenvalues of T strictly below sigma (Sturm/LDL^T count).
int sturm_count(const Tridiag& T, double sigma);

// k-th smallest eigenvalue (k = 0 is the lowest) by Sturm bisection.
double tridiag_eigenvalue(const Tridiag& T, int k, double tol = 1e-13);

// Eigenvector for an eigenvalue approximation by inverse iteration;
// returns the (refined eigenvalue, unit-2-norm vector) pair.
std::pair<double, std::vector<double>> tridiag_eigenpair(const Tridiag& T,
                                                         double approx);

}  // namespace liouville
