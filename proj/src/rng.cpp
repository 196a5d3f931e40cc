#include "cata/rng.hpp"

#include <cmath>
#include <numbers>

namespace cata {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  for (char c : label) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  return splitmix64(h ^ (index * 0xd1342543de82ef95ULL + 1));
}

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void Rng::fill_exponential(std::span<double> out) {
  for (double& v : out) v = exponential();
}

}  // namespace cata
