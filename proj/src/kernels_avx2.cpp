#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "cata/kernels.hpp"

// AVX2 variants. Transcendentals are computed with standard range-reduction
// polynomials (worst case a few ulp); everything is equivalence-tested against
// the scalar reference in tests/test_kernels.cpp. vexp clamps its argument to
// [-708, 709], so results below exp(-708) flush toward 3e-308 instead of a
// gradual denormal tail; callers here treat anything that small as zero.

namespace cata::kernels::avx2 {
namespace {

inline __m256d vset1(double v) { return _mm256_set1_pd(v); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// exp(x), |x| clamped to [-708, 709]; degree-13 Taylor on [-ln2/2, ln2/2].
inline __m256d exp4(__m256d x) {
  const __m256d log2e = vset1(1.4426950408889634074);
  const __m256d ln2_hi = vset1(6.93147180369123816490e-01);
  const __m256d ln2_lo = vset1(1.90821492927058770002e-10);

  x = _mm256_max_pd(x, vset1(-708.0));
  x = _mm256_min_pd(x, vset1(709.0));

  __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  __m256d p = vset1(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, vset1(0.5));
  p = _mm256_fmadd_pd(p, r, vset1(1.0));
  p = _mm256_fmadd_pd(p, r, vset1(1.0));

  __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i k64 = _mm256_cvtepi32_epi64(k32);
  __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// log(x); atanh series after mantissa split, subnormals rescaled first.
inline __m256d log4(__m256d x) {
  const __m256d two52 = vset1(4503599627370496.0);  // 2^52
  const __m256d min_normal = vset1(2.2250738585072014e-308);
  const __m256d ln2_hi = vset1(6.93147180369123816490e-01);
  const __m256d ln2_lo = vset1(1.90821492927058770002e-10);

  __m256d bad = _mm256_cmp_pd(x, min_normal, _CMP_LT_OQ);  // 0, negatives, subnormals
  __m256d inf_mask = _mm256_cmp_pd(x, vset1(HUGE_VAL), _CMP_EQ_OQ);
  __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  __m256d zero_or_sub = _mm256_and_pd(bad, _mm256_cmp_pd(x, vset1(0.0), _CMP_GE_OQ));

  // rescale subnormal (and zero, harmlessly) inputs by 2^54
  __m256d xs = _mm256_mul_pd(x, vset1(18014398509481984.0));  // 2^54
  x = _mm256_blendv_pd(x, xs, zero_or_sub);
  __m256d e_extra = _mm256_and_pd(zero_or_sub, vset1(54.0));

  __m256i ib = _mm256_castpd_si256(x);
  __m256i expo = _mm256_and_si256(_mm256_srli_epi64(ib, 52), _mm256_set1_epi64x(0x7ff));
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(expo, _mm256_castpd_si256(two52))),
      two52);
  e = _mm256_sub_pd(e, vset1(1023.0));
  e = _mm256_sub_pd(e, e_extra);

  __m256i mant = _mm256_or_si256(
      _mm256_and_si256(ib, _mm256_set1_epi64x(0x000fffffffffffffLL)),
      _mm256_set1_epi64x(0x3ff0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant);  // [1, 2)

  __m256d gt = _mm256_cmp_pd(m, vset1(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, vset1(0.5)), gt);
  e = _mm256_add_pd(e, _mm256_and_pd(gt, vset1(1.0)));

  const __m256d one = vset1(1.0);
  __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d w = _mm256_mul_pd(s, s);

  __m256d p = vset1(1.0 / 17.0);
  p = _mm256_fmadd_pd(p, w, vset1(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, w, vset1(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, w, vset1(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, w, vset1(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, w, vset1(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, w, vset1(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, w, vset1(1.0 / 3.0));
  p = _mm256_fmadd_pd(p, w, one);
  __m256d logm = _mm256_mul_pd(_mm256_add_pd(s, s), p);

  __m256d res = _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, logm));

  // specials
  __m256d neg = _mm256_cmp_pd(_mm256_blendv_pd(x, vset1(1.0), zero_or_sub),
                              vset1(0.0), _CMP_LT_OQ);
  __m256d zero = _mm256_and_pd(zero_or_sub,
                               _mm256_cmp_pd(x, vset1(0.0), _CMP_EQ_OQ));
  res = _mm256_blendv_pd(res, vset1(-HUGE_VAL), zero);
  res = _mm256_blendv_pd(res, vset1(std::nan("")), _mm256_or_pd(neg, nan_mask));
  res = _mm256_blendv_pd(res, vset1(HUGE_VAL), inf_mask);
  return res;
}

}  // namespace

double sum(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void scale(double* y, std::size_t n, double a) {
  const __m256d va = vset1(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), va));
  for (; i < n; ++i) y[i] *= a;
}

void axpy(double* y, std::size_t n, double a, const double* x) {
  const __m256d va = vset1(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void lerp(double* y, std::size_t n, const double* x, double t) {
  const __m256d vt = vset1(t), vomt = vset1(1.0 - t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(vt, _mm256_loadu_pd(x + i),
                                _mm256_mul_pd(vomt, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] = (1.0 - t) * y[i] + t * x[i];
}

void retain(double* y, std::size_t n, const double* loss) {
  const __m256d one = vset1(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d keep = _mm256_sub_pd(one, _mm256_loadu_pd(loss + i));
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), keep));
  }
  for (; i < n; ++i) y[i] *= 1.0 - loss[i];
}

void mul_add_scaled(double* out, std::size_t n, const double* a,
                    const double* b, double w, const double* c) {
  const __m256d vw = vset1(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                                _mm256_mul_pd(vw, _mm256_loadu_pd(c + i)));
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = a[i] * b[i] + w * c[i];
}

void vexp(double* out, std::size_t n, const double* x) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  if (i < n) {
    double buf_in[4] = {0, 0, 0, 0}, buf_out[4];
    for (std::size_t j = i; j < n; ++j) buf_in[j - i] = x[j];
    _mm256_storeu_pd(buf_out, exp4(_mm256_loadu_pd(buf_in)));
    for (std::size_t j = i; j < n; ++j) out[j] = buf_out[j - i];
  }
}

void vlog(double* out, std::size_t n, const double* x) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log4(_mm256_loadu_pd(x + i)));
  if (i < n) {
    double buf_in[4] = {1, 1, 1, 1}, buf_out[4];
    for (std::size_t j = i; j < n; ++j) buf_in[j - i] = x[j];
    _mm256_storeu_pd(buf_out, log4(_mm256_loadu_pd(buf_in)));
    for (std::size_t j = i; j < n; ++j) out[j] = buf_out[j - i];
  }
}

void gumbel_uniforms(double* u, std::size_t n, const double* e,
                     double inv_theta, double log_frailty) {
  const __m256d vit = vset1(inv_theta), vlf = vset1(log_frailty);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(vit, _mm256_sub_pd(log4(_mm256_loadu_pd(e + i)), vlf));
    __m256d powed = exp4(t);
    _mm256_storeu_pd(u + i, exp4(_mm256_sub_pd(_mm256_setzero_pd(), powed)));
  }
  for (; i < n; ++i) {
    const double t = inv_theta * (std::log(e[i]) - log_frailty);
    u[i] = std::exp(-std::exp(t));
  }
}

void flood_losses(double* loss, std::size_t n, const double* u,
                  const double* protection, const double* scale,
                  const double* log_t0, double event_t, double t_max) {
  const __m256d one = vset1(1.0), zero = _mm256_setzero_pd();
  const __m256d vtmax = vset1(t_max), vevt = vset1(event_t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vu = _mm256_loadu_pd(u + i);
    __m256d t_loc = _mm256_div_pd(one, _mm256_sub_pd(one, vu));
    t_loc = _mm256_min_pd(t_loc, vtmax);
    __m256d l = _mm256_mul_pd(_mm256_loadu_pd(scale + i),
                              _mm256_sub_pd(log4(t_loc), _mm256_loadu_pd(log_t0 + i)));
    l = _mm256_max_pd(l, zero);
    l = _mm256_min_pd(l, one);
    __m256d prot = _mm256_loadu_pd(protection + i);
    __m256d act = _mm256_and_pd(_mm256_cmp_pd(prot, vevt, _CMP_LE_OQ),
                                _mm256_cmp_pd(t_loc, prot, _CMP_GT_OQ));
    _mm256_storeu_pd(loss + i, _mm256_and_pd(l, act));
  }
  for (; i < n; ++i) {
    const double t_loc = std::min(1.0 / (1.0 - u[i]), t_max);
    double l = scale[i] * (std::log(t_loc) - log_t0[i]);
    l = l < 0.0 ? 0.0 : (l > 1.0 ? 1.0 : l);
    const bool active = protection[i] <= event_t && t_loc > protection[i];
    loss[i] = active ? l : 0.0;
  }
}

}  // namespace cata::kernels::avx2

namespace cata::kernels {

const Table& avx2_table() {
  static const Table t = {
      &avx2::sum,           &avx2::dot,
      &avx2::scale,         &avx2::axpy,
      &avx2::lerp,          &avx2::retain,
      &avx2::mul_add_scaled, &avx2::vexp,
      &avx2::vlog,          &avx2::gumbel_uniforms,
      &avx2::flood_losses,
  };
  return t;
}

}  // namespace cata::kernels
