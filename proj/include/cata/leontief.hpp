#pragma once
#include <span>
#include <vector>

#include "cata/linalg.hpp"

namespace cata {

// Input-output requirements solver: x = (I - A)^{-1} f for a productive
// technical-coefficient matrix A (row-major a[i*n+j] = deliveries from i per
// unit of j's output). Construction validates productivity (spectral radius
// of A below 1) and factorizes once.
class Leontief {
 public:
  Leontief(int n, std::span<const double> a);

  int size() const { return n_; }
  const std::vector<double>& matrix() const { return a_; }

  // gross output needed to serve final demand f
  std::vector<double> requirements(std::span<const double> final_demand) const;

  // intermediate use Ax of a gross output vector
  std::vector<double> intermediate(std::span<const double> gross_output) const;

 private:
  int n_ = 0;
  std::vector<double> a_;
  linalg::Lu lu_;
};

}  // namespace cata
