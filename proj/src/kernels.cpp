#include <cstdlib>
#include <stdexcept>
#include <string>

#include "cata/kernels.hpp"

namespace cata::kernels {

const Table& scalar_table();
#ifdef CATA_HAVE_AVX2
const Table& avx2_table();
#endif

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef CATA_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const Table& table(Isa isa) {
  if (isa == Isa::scalar) return scalar_table();
#ifdef CATA_HAVE_AVX2
  if (isa == Isa::avx2) {
    if (!isa_available(Isa::avx2)) throw std::runtime_error("avx2 not supported on this cpu");
    return avx2_table();
  }
#endif
  throw std::runtime_error("kernel isa not compiled in");
}

namespace {

Isa resolve_isa() {
  if (const char* env = std::getenv("CATACLYSM_KERNEL_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    // fall through: unknown or unavailable request uses the default pick
  }
  if (isa_available(Isa::avx2)) return Isa::avx2;
  return Isa::scalar;
}

const Table& active() {
  static const Table& t = table(resolve_isa());
  return t;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = resolve_isa();
  return isa;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

void scale(std::span<double> y, double a) { active().scale(y.data(), y.size(), a); }

void axpy(std::span<double> y, double a, std::span<const double> x) {
  active().axpy(y.data(), y.size(), a, x.data());
}

void lerp(std::span<double> y, std::span<const double> x, double t) {
  active().lerp(y.data(), y.size(), x.data(), t);
}

void retain(std::span<double> y, std::span<const double> loss) {
  active().retain(y.data(), y.size(), loss.data());
}

void mul_add_scaled(std::span<double> out, std::span<const double> a,
                    std::span<const double> b, double w,
                    std::span<const double> c) {
  active().mul_add_scaled(out.data(), out.size(), a.data(), b.data(), w, c.data());
}

void vexp(std::span<double> out, std::span<const double> x) {
  active().vexp(out.data(), out.size(), x.data());
}

void vlog(std::span<double> out, std::span<const double> x) {
  active().vlog(out.data(), out.size(), x.data());
}

void gumbel_uniforms(std::span<double> u, std::span<const double> e,
                     double inv_theta, double log_frailty) {
  active().gumbel_uniforms(u.data(), u.size(), e.data(), inv_theta, log_frailty);
}

void flood_losses(std::span<double> loss, std::span<const double> u,
                  std::span<const double> protection,
                  std::span<const double> scale, std::span<const double> log_t0,
                  double event_t, double t_max) {
  active().flood_losses(loss.data(), loss.size(), u.data(), protection.data(),
                        scale.data(), log_t0.data(), event_t, t_max);
}

}  // namespace cata::kernels
