#pragma once
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace cata {

// Deterministic stream derivation: child streams are keyed by (seed, label,
// index) through splitmix64 so that run i's event draws never depend on how
// many workers are active or in what order jobs complete.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index);

// mt19937_64 with explicit, implementation-independent output transforms.
// (std:: distributions are implementation-defined; the engine itself is
// bit-exact per the standard.)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform on the open interval (0, 1): safe under log()
  double uniform_open() {
    return (static_cast<double>(eng_() >> 12) + 0.5) * 0x1.0p-52;
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential() { return -std::log(uniform_open()); }

  // standard normal, Box-Muller (uses two draws; no state carried over)
  double normal();

  void fill_exponential(std::span<double> out);

 private:
  std::mt19937_64 eng_;
};

}  // namespace cata
