#include "cata/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cata {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void RunManifest::add_output(const std::string& path) {
  output_checksums.emplace_back(std::filesystem::path(path).filename().string(),
                                hex64(fnv1a64_file(path)));
}

void RunManifest::write(const std::string& path) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["config"] = config_text;
  j["master_seed"] = master_seed;
  j["run_seeds"] = run_seeds;
  j["kernel_isa"] = kernel_isa;
  j["started_utc"] = started_utc;
  nlohmann::ordered_json outs = nlohmann::ordered_json::object();
  for (const auto& [file, sum] : output_checksums) outs[file] = sum;
  j["outputs"] = outs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

RunManifest RunManifest::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.config_text = j.at("config").get<std::string>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.run_seeds = j.at("run_seeds").get<std::vector<std::uint64_t>>();
  m.kernel_isa = j.at("kernel_isa").get<std::string>();
  m.started_utc = j.at("started_utc").get<std::string>();
  for (auto it = j.at("outputs").begin(); it != j.at("outputs").end(); ++it)
    m.output_checksums.emplace_back(it.key(), it.value().get<std::string>());
  return m;
}

}  // namespace cata
