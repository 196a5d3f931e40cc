#include "cata/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cata/linalg.hpp"

namespace cata {
namespace {

// Interval index i such that x[i] <= xq < x[i+1], clamped to valid segments.
int segment(const std::vector<double>& x, double xq) {
  int n = static_cast<int>(x.size());
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  int i = static_cast<int>(it - x.begin()) - 1;
  return std::clamp(i, 0, n - 2);
}

struct Cubic {
  double a, b, c, d, h;  // S(x_i + t) = a + b t + c t^2 + d t^3, t in [0, h]
};

Cubic coeffs(const SmoothingSpline& s, int i) {
  double h = s.x[i + 1] - s.x[i];
  double gi = s.gamma[i], gj = s.gamma[i + 1];
  Cubic q;
  q.h = h;
  q.a = s.f[i];
  q.c = 0.5 * gi;
  q.d = (gj - gi) / (6.0 * h);
  q.b = (s.f[i + 1] - s.f[i]) / h - h * (2.0 * gi + gj) / 6.0;
  return q;
}

// Fit with a fixed penalty; also reports trace of the hat matrix and RSS so
// the caller can evaluate GCV.
SmoothingSpline fit_fixed(std::span<const double> xs, std::span<const double> ys,
                          double lambda, double* trace_out, double* rss_out) {
  int n = static_cast<int>(xs.size());
  if (n < 4) throw std::invalid_argument("smoothing spline needs at least 4 points");
  if (ys.size() != xs.size())
    throw std::invalid_argument("smoothing spline: x/y length mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (!(xs[i + 1] > xs[i]))
      throw std::invalid_argument("smoothing spline: x must be strictly increasing");

  int m = n - 2;
  std::vector<double> h(n - 1);
  for (int i = 0; i + 1 < n; ++i) h[i] = xs[i + 1] - xs[i];

  // Q (n x m) and tridiagonal R (m x m) from the natural-spline curvature
  // identities; K = Q R^-1 Q^T is the penalty matrix.
  std::vector<double> q(static_cast<size_t>(n) * m, 0.0);
  std::vector<double> r(static_cast<size_t>(m) * m, 0.0);
  for (int j = 0; j < m; ++j) {
    int i = j + 1;  // interior knot index
    q[static_cast<size_t>(i - 1) * m + j] = 1.0 / h[i - 1];
    q[static_cast<size_t>(i) * m + j] = -1.0 / h[i - 1] - 1.0 / h[i];
    q[static_cast<size_t>(i + 1) * m + j] = 1.0 / h[i];
    r[static_cast<size_t>(j) * m + j] = (h[i - 1] + h[i]) / 3.0;
    if (j + 1 < m) {
      r[static_cast<size_t>(j) * m + j + 1] = h[i] / 6.0;
      r[static_cast<size_t>(j + 1) * m + j] = h[i] / 6.0;
    }
  }

  auto rlu = linalg::lu_factor(r, m);
  if (rlu.singular) throw std::runtime_error("smoothing spline: R factorization failed");

  // Z = R^-1 Q^T (m x n), so K = Q Z and the interior curvatures are Z f.
  std::vector<double> z(static_cast<size_t>(m) * n);
  {
    std::vector<double> col(m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) col[j] = q[static_cast<size_t>(i) * m + j];
      auto sol = linalg::lu_solve(rlu, col);
      for (int j = 0; j < m; ++j) z[static_cast<size_t>(j) * n + i] = sol[j];
    }
  }

  // A = I + lambda K
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      double kik = 0.0;
      for (int j = 0; j < m; ++j)
        kik += q[static_cast<size_t>(i) * m + j] * z[static_cast<size_t>(j) * n + k];
      a[static_cast<size_t>(i) * n + k] = lambda * kik + (i == k ? 1.0 : 0.0);
    }
  }
  auto alu = linalg::lu_factor(a, n);
  if (alu.singular) throw std::runtime_error("smoothing spline: system is singular");

  SmoothingSpline s;
  s.x.assign(xs.begin(), xs.end());
  s.lambda = lambda;
  std::vector<double> y(ys.begin(), ys.end());
  s.f = linalg::lu_solve(alu, y);

  s.gamma.assign(n, 0.0);
  for (int j = 0; j < m; ++j) {
    double g = 0.0;
    for (int i = 0; i < n; ++i) g += z[static_cast<size_t>(j) * n + i] * s.f[i];
    s.gamma[j + 1] = g;
  }

  if (trace_out) {
    double tr = 0.0;
    std::vector<double> e(n, 0.0);
    for (int k = 0; k < n; ++k) {
      e[k] = 1.0;
      auto hk = linalg::lu_solve(alu, e);
      tr += hk[k];
      e[k] = 0.0;
    }
    *trace_out = tr;
  }
  if (rss_out) {
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = y[i] - s.f[i];
      rss += d * d;
    }
    *rss_out = rss;
  }
  return s;
}

}  // namespace

SmoothingSpline fit_smoothing_spline(std::span<const double> x, std::span<const double> y,
                                     double lambda) {
  return fit_fixed(x, y, lambda, nullptr, nullptr);
}

SmoothingSpline fit_smoothing_spline(std::span<const double> x, std::span<const double> y) {
  int n = static_cast<int>(x.size());
  double best_gcv = 0.0, best_lambda = 0.0;
  bool have = false;
  for (double p = -12.0; p <= 4.0 + 1e-9; p += 0.5) {
    double lambda = std::pow(10.0, p);
    double tr = 0.0, rss = 0.0;
    fit_fixed(x, y, lambda, &tr, &rss);
    double denom = 1.0 - tr / n;
    if (denom <= 1e-10) continue;  // effectively interpolating; GCV undefined
    double gcv = (rss / n) / (denom * denom);
    if (!have || gcv < best_gcv) {
      have = true;
      best_gcv = gcv;
      best_lambda = lambda;
    }
  }
  if (!have) best_lambda = 1e-6;
  auto s = fit_fixed(x, y, best_lambda, nullptr, nullptr);
  s.gcv = best_gcv;
  return s;
}

double SmoothingSpline::value(double xq) const {
  int i = segment(x, xq);
  Cubic q = coeffs(*this, i);
  double t = xq - x[i];
  return q.a + t * (q.b + t * (q.c + t * q.d));
}

double SmoothingSpline::derivative(double xq) const {
  int i = segment(x, xq);
  Cubic q = coeffs(*this, i);
  double t = xq - x[i];
  return q.b + t * (2.0 * q.c + 3.0 * q.d * t);
}

double SmoothingSpline::second(double xq) const {
  int i = segment(x, xq);
  double t = (xq - x[i]) / (x[i + 1] - x[i]);
  return gamma[i] * (1.0 - t) + gamma[i + 1] * t;
}

double SmoothingSpline::argmax(double lo, double hi) const {
  lo = std::max(lo, x.front());
  hi = std::min(hi, x.back());
  double best_x = lo, best_v = value(lo);
  auto consider = [&](double xc) {
    if (xc < lo || xc > hi) return;
    double v = value(xc);
    if (v > best_v) {
      best_v = v;
      best_x = xc;
    }
  };
  consider(hi);
  int n = static_cast<int>(x.size());
  for (int i = 0; i + 1 < n; ++i) {
    if (x[i + 1] < lo || x[i] > hi) continue;
    Cubic q = coeffs(*this, i);
    consider(x[i]);
    // stationary points: b + 2c t + 3d t^2 = 0
    if (std::abs(q.d) > 1e-300) {
      double disc = 4.0 * q.c * q.c - 12.0 * q.d * q.b;
      if (disc >= 0.0) {
        double sq = std::sqrt(disc);
        for (double t : {(-2.0 * q.c + sq) / (6.0 * q.d), (-2.0 * q.c - sq) / (6.0 * q.d)})
          if (t >= 0.0 && t <= q.h) consider(x[i] + t);
      }
    } else if (std::abs(q.c) > 1e-300) {
      double t = -q.b / (2.0 * q.c);
      if (t >= 0.0 && t <= q.h) consider(x[i] + t);
    }
  }
  return best_x;
}

std::optional<double> SmoothingSpline::inflection_below(double x_ref) const {
  std::optional<double> best;
  int n = static_cast<int>(x.size());
  for (int i = 0; i + 1 < n; ++i) {
    double gi = gamma[i], gj = gamma[i + 1];
    if (gi > 0.0 && gj < 0.0) {
      double xc = x[i] + (x[i + 1] - x[i]) * gi / (gi - gj);
      if (xc < x_ref && (!best || xc > *best)) best = xc;
    }
  }
  return best;
}

std::optional<double> SmoothingSpline::root_above(double x_ref) const {
  int n = static_cast<int>(x.size());
  for (int i = 0; i + 1 < n; ++i) {
    if (x[i + 1] <= x_ref) continue;
    double lo = std::max(x[i], x_ref), hi = x[i + 1];
    double vlo = value(lo), vhi = value(hi);
    if (vlo == 0.0) return lo;
    if (vlo * vhi > 0.0) continue;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double vm = value(mid);
      if ((vm < 0.0) == (vlo < 0.0)) {
        lo = mid;
        vlo = vm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

}  // namespace cata
