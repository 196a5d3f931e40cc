#include "cata/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>

namespace cata::linalg {

Lu lu_factor(std::span<const double> a, int n) {
  Lu f;
  f.n = n;
  f.lu.assign(a.begin(), a.end());
  f.perm.resize(static_cast<std::size_t>(n));
  std::iota(f.perm.begin(), f.perm.end(), 0);
  auto at = [&](int r, int c) -> double& { return f.lu[static_cast<std::size_t>(r) * n + c]; };

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(at(k, k));
    for (int r = k + 1; r < n; ++r) {
      const double v = std::fabs(at(r, k));
      if (v > best) { best = v; piv = r; }
    }
    if (best == 0.0) { f.singular = true; return f; }
    if (piv != k) {
      for (int c = 0; c < n; ++c) std::swap(at(k, c), at(piv, c));
      std::swap(f.perm[static_cast<std::size_t>(k)], f.perm[static_cast<std::size_t>(piv)]);
    }
    const double d = at(k, k);
    for (int r = k + 1; r < n; ++r) {
      const double m = at(r, k) / d;
      at(r, k) = m;
      for (int c = k + 1; c < n; ++c) at(r, c) -= m * at(k, c);
    }
  }
  return f;
}

std::vector<double> lu_solve(const Lu& f, std::span<const double> b) {
  const int n = f.n;
  std::vector<double> x(static_cast<std::size_t>(n));
  auto at = [&](int r, int c) { return f.lu[static_cast<std::size_t>(r) * n + c]; };
  for (int r = 0; r < n; ++r) x[static_cast<std::size_t>(r)] = b[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(r)])];
  for (int r = 1; r < n; ++r) {
    double acc = x[static_cast<std::size_t>(r)];
    for (int c = 0; c < r; ++c) acc -= at(r, c) * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc;
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = x[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) acc -= at(r, c) * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc / at(r, r);
  }
  return x;
}

std::vector<double> matvec(std::span<const double> a, int n, std::span<const double> x) {
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int c = 0; c < n; ++c) acc += a[static_cast<std::size_t>(r) * n + c] * x[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(r)] = acc;
  }
  return b;
}

double spectral_radius_nonneg(std::span<const double> a, int n, int max_iter, double tol) {
  std::vector<double> v(static_cast<std::size_t>(n), 1.0);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> w = matvec(a, n, v);
    double norm = 0.0;
    for (double u : w) norm += u;
    if (norm == 0.0) return 0.0;
    for (double& u : w) u /= norm;
    const double prev = lambda;
    lambda = norm;
    v = std::move(w);
    if (it > 0 && std::fabs(lambda - prev) <= tol * std::fabs(lambda)) break;
  }
  return lambda;
}

}  // namespace cata::linalg
