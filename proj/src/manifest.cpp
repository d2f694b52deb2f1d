#include "gdim/manifest.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gdim/random.hpp"

namespace gdim {

using nlohmann::json;

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    h = fnv1a64(std::string_view(buffer, static_cast<std::size_t>(in.gcount())),
                h);
  }
  return h;
}

void RunManifest::add_input(const std::string& path) {
  std::ostringstream hex;
  hex << std::hex << file_digest(path);
  input_digests_[path] = hex.str();
}

void RunManifest::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  json j;
  j["command"] = command;
  j["seed"] = seed;
  j["tool_version"] = kToolVersion;
  j["config"] = config;
  // Hash over the sorted merged config so reruns are comparable.
  std::string flat;
  for (const auto& [k, v] : config) flat += k + "=" + v + "\n";
  std::ostringstream hex;
  hex << std::hex << fnv1a64(flat);
  j["config_hash"] = hex.str();
  j["inputs"] = input_digests_;
  auto now = std::chrono::system_clock::now();
  j["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  std::ofstream out((std::filesystem::path(dir) / "manifest.json").string());
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << j.dump(2) << "\n";
}

}  // namespace gdim
