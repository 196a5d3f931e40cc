#pragma once
#include <span>
#include <vector>

namespace cata::linalg {

// Dense row-major n x n matrix helpers, sized for S <= 64 sector systems and
// the 12-point sweep spline; not meant for large n.

struct Lu {
  int n = 0;
  std::vector<double> lu;   // row-major factors
  std::vector<int> perm;    // row permutation
  bool singular = false;
};

Lu lu_factor(std::span<const double> a, int n);
std::vector<double> lu_solve(const Lu& f, std::span<const double> b);

// b := A x
std::vector<double> matvec(std::span<const double> a, int n,
                           std::span<const double> x);

// Dominant eigenvalue magnitude of a nonnegative matrix (power iteration).
double spectral_radius_nonneg(std::span<const double> a, int n,
                              int max_iter = 20000, double tol = 1e-13);

}  // namespace cata::linalg
