#ifndef GDIM_MANIFEST_HPP
#define GDIM_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gdim {

inline const std::string kToolVersion = "0.1.0";

// Reproducibility record written next to every subcommand's outputs.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;  // merged config view
  std::uint64_t seed = 0;

  void add_input(const std::string& path);  // records an FNV-64 file digest
  void write(const std::string& dir) const;  // dir/manifest.json

 private:
  std::map<std::string, std::string> input_digests_;
};

std::uint64_t file_digest(const std::string& path);

}  // namespace gdim

#endif  // GDIM_MANIFEST_HPP
