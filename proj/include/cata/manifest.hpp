#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace cata {

std::uint64_t fnv1a64(const std::string& data);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

// Reproduction record: everything needed to regenerate a result set
// byte-for-byte, plus checksums to verify it happened.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string config_text;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> run_seeds;
  std::string kernel_isa;
  std::string started_utc;
  std::vector<std::pair<std::string, std::string>> output_checksums;  // (file, fnv64)

  void add_output(const std::string& path);
  void write(const std::string& path) const;
  static RunManifest read(const std::string& path);
};

}  // namespace cata
