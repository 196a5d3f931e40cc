#pragma once
#include <cstddef>
#include <span>

// Array kernels used by the hazard sampler and the quarterly economy step.
// Every kernel has a scalar reference implementation and may have SIMD
// variants; the active variant is picked once per process at first use.
// Override with CATACLYSM_KERNEL_ISA=scalar|avx2 (unknown/unsupported values
// fall back to the best available).

namespace cata::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

// --- reductions ---------------------------------------------------------
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

// --- elementwise --------------------------------------------------------
// y *= a
void scale(std::span<double> y, double a);
// y += a * x
void axpy(std::span<double> y, double a, std::span<const double> x);
// y = (1 - t) * y + t * x   (expectation smoothing)
void lerp(std::span<double> y, std::span<const double> x, double t);
// y *= (1 - loss)           (damage retention)
void retain(std::span<double> y, std::span<const double> loss);
// out = a*b + w*c           (cohort budgets and similar fused updates)
void mul_add_scaled(std::span<double> out, std::span<const double> a,
                    std::span<const double> b, double w,
                    std::span<const double> c);
void vexp(std::span<double> out, std::span<const double> x);
void vlog(std::span<double> out, std::span<const double> x);

// --- fused hazard transforms -------------------------------------------
// u[i] = exp(-exp(inv_theta * (log(e[i]) - log_frailty)))
// i.e. the Archimedean-generator map u = psi(E / S) with psi(t) = exp(-t^(1/theta)).
void gumbel_uniforms(std::span<double> u, std::span<const double> e,
                     double inv_theta, double log_frailty);

// Per-cell flood loss from copula uniforms.
//   t_loc   = min(1 / (1 - u), t_max)
//   loss    = clamp(scale * (log(t_loc) - log_t0), 0, 1)
// gated to zero unless protection < t_loc (local gate) and
// protection <= event_t (event-level gate).
void flood_losses(std::span<double> loss, std::span<const double> u,
                  std::span<const double> protection,
                  std::span<const double> scale,
                  std::span<const double> log_t0, double event_t,
                  double t_max);

// --- dispatch table (exposed for equivalence tests) ---------------------
struct Table {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
  void (*axpy)(double*, std::size_t, double, const double*);
  void (*lerp)(double*, std::size_t, const double*, double);
  void (*retain)(double*, std::size_t, const double*);
  void (*mul_add_scaled)(double*, std::size_t, const double*, const double*,
                         double, const double*);
  void (*vexp)(double*, std::size_t, const double*);
  void (*vlog)(double*, std::size_t, const double*);
  void (*gumbel_uniforms)(double*, std::size_t, const double*, double, double);
  void (*flood_losses)(double*, std::size_t, const double*, const double*,
                       const double*, const double*, double, double);
};

const Table& table(Isa isa);  // throws if the ISA is not compiled in/supported
bool isa_available(Isa isa);

}  // namespace cata::kernels
