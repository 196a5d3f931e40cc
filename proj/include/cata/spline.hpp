#pragma once
#include <optional>
#include <span>
#include <vector>

namespace cata {

// Natural cubic smoothing spline (penalized residual sum of squares with
// curvature penalty lambda). With lambda -> 0 it interpolates; the
// no-argument fit picks lambda by generalized cross-validation on a log grid.
// Sized for small sweeps (tens of knots), dense linear algebra throughout.
struct SmoothingSpline {
  std::vector<double> x;      // strictly increasing knots
  std::vector<double> f;      // fitted values at the knots
  std::vector<double> gamma;  // second derivatives at the knots (natural: ends 0)
  double lambda = 0.0;
  double gcv = 0.0;

  double value(double xq) const;
  double derivative(double xq) const;
  double second(double xq) const;

  // location of the spline maximum on [lo, hi]
  double argmax(double lo, double hi) const;
  // nearest curvature sign change (+ to -) strictly below x_ref
  std::optional<double> inflection_below(double x_ref) const;
  // smallest root above x_ref, if the spline crosses zero there
  std::optional<double> root_above(double x_ref) const;
};

SmoothingSpline fit_smoothing_spline(std::span<const double> x, std::span<const double> y,
                                     double lambda);
SmoothingSpline fit_smoothing_spline(std::span<const double> x, std::span<const double> y);

}  // namespace cata
