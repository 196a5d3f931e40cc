#include <algorithm>
#include <cmath>
#include <cstddef>

#include "cata/kernels.hpp"

// Reference implementations. Deliberately plain loops: these define the
// semantics the SIMD variants are tested against.

namespace cata::kernels::scalar {

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void scale(double* y, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void axpy(double* y, std::size_t n, double a, const double* x) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lerp(double* y, std::size_t n, const double* x, double t) {
  for (std::size_t i = 0; i < n; ++i) y[i] = (1.0 - t) * y[i] + t * x[i];
}

void retain(double* y, std::size_t n, const double* loss) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= 1.0 - loss[i];
}

void mul_add_scaled(double* out, std::size_t n, const double* a,
                    const double* b, double w, const double* c) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i] + w * c[i];
}

void vexp(double* out, std::size_t n, const double* x) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void vlog(double* out, std::size_t n, const double* x) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void gumbel_uniforms(double* u, std::size_t n, const double* e,
                     double inv_theta, double log_frailty) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = inv_theta * (std::log(e[i]) - log_frailty);
    u[i] = std::exp(-std::exp(t));
  }
}

void flood_losses(double* loss, std::size_t n, const double* u,
                  const double* protection, const double* scale,
                  const double* log_t0, double event_t, double t_max) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t_loc = std::min(1.0 / (1.0 - u[i]), t_max);
    double l = scale[i] * (std::log(t_loc) - log_t0[i]);
    l = std::clamp(l, 0.0, 1.0);
    const bool active = protection[i] <= event_t && t_loc > protection[i];
    loss[i] = active ? l : 0.0;
  }
}

}  // namespace cata::kernels::scalar

namespace cata::kernels {

const Table& scalar_table() {
  static const Table t = {
      &scalar::sum,           &scalar::dot,
      &scalar::scale,         &scalar::axpy,
      &scalar::lerp,          &scalar::retain,
      &scalar::mul_add_scaled, &scalar::vexp,
      &scalar::vlog,          &scalar::gumbel_uniforms,
      &scalar::flood_losses,
  };
  return t;
}

}  // namespace cata::kernels
