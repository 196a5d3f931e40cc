#include "cata/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "cata/kernels.hpp"

namespace cata::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return kernels::sum(x) / static_cast<double>(x.size());
}

double stdev(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(n - 1));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// counts inversions in v with merge sort
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& tmp,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, tmp, lo, mid) + count_inversions(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
            tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });
  std::vector<double> ysorted(n);
  for (std::size_t i = 0; i < n; ++i) ysorted[i] = y[idx[i]];
  std::vector<double> tmp(n);
  const std::uint64_t discordant = count_inversions(ysorted, tmp, 0, n);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return 1.0 - 2.0 * static_cast<double>(discordant) / pairs;
}

double ks_statistic_uniform(std::span<const double> u) {
  std::vector<double> s(u.begin(), u.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cdf = std::clamp(s[i], 0.0, 1.0);
    const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double kolmogorov_cdf(double lambda) {
  if (lambda <= 0.0) return 0.0;
  double acc = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    acc += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::max(0.0, 1.0 - 2.0 * acc);
}

double ks_pvalue_uniform(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  const double d = ks_statistic_uniform(u);
  // Stephens' small-sample adjustment
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  return 1.0 - kolmogorov_cdf(lambda);
}

}  // namespace cata::stats
