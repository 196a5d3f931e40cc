#pragma once
#include <span>
#include <vector>

namespace cata::stats {

double mean(std::span<const double> x);
// sample standard deviation (n-1 denominator); 0 for n < 2
double stdev(std::span<const double> x);
double pearson(std::span<const double> x, std::span<const double> y);

// Kendall tau-a via merge-sort inversion counting, O(n log n).
// Assumes continuous data (no ties); ties in x are broken by y order and
// counted as discordant-neutral, which is fine for samples from a density.
double kendall_tau(std::span<const double> x, std::span<const double> y);

// One-sample Kolmogorov-Smirnov statistic against U(0,1).
double ks_statistic_uniform(std::span<const double> u);

// Asymptotic Kolmogorov distribution: P(sqrt(n) D_n <= lambda).
double kolmogorov_cdf(double lambda);

// p-value for the one-sample KS test against U(0,1).
double ks_pvalue_uniform(std::span<const double> u);

}  // namespace cata::stats
