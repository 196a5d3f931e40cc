#include "cata/leontief.hpp"

#include <cstddef>
#include <sstream>
#include <stdexcept>

namespace cata {

Leontief::Leontief(int n, std::span<const double> a) : n_(n), a_(a.begin(), a.end()) {
  if (n <= 0 || a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::runtime_error("io matrix size mismatch");
  }
  for (double v : a_) {
    if (!(v >= 0.0)) throw std::runtime_error("io matrix has a negative coefficient");
  }
  double rho = linalg::spectral_radius_nonneg(a_, n_);
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "io matrix is not productive: spectral radius " << rho;
    throw std::runtime_error(os.str());
  }
  std::vector<double> ima(a_.size());
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      std::size_t k = static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                      static_cast<std::size_t>(j);
      ima[k] = (i == j ? 1.0 : 0.0) - a_[k];
    }
  }
  lu_ = linalg::lu_factor(ima, n_);
  if (lu_.singular) throw std::runtime_error("I - A is singular");
}

std::vector<double> Leontief::requirements(std::span<const double> final_demand) const {
  if (final_demand.size() != static_cast<std::size_t>(n_)) {
    throw std::runtime_error("final demand size mismatch");
  }
  return linalg::lu_solve(lu_, final_demand);
}

std::vector<double> Leontief::intermediate(std::span<const double> gross_output) const {
  if (gross_output.size() != static_cast<std::size_t>(n_)) {
    throw std::runtime_error("gross output size mismatch");
  }
  return linalg::matvec(a_, n_, gross_output);
}

}  // namespace cata
