#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snse/config.hpp"

namespace snse {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a 64-bit hash, used for config and output checksums.
std::uint64_t fnv1a(const void* data, std::size_t size);
std::uint64_t fnv1a_file(const std::string& path);

struct OutputRecord {
  std::string path;   // relative to the run directory
  std::uint64_t bytes = 0;
  std::string fnv64;  // hex
};

class Manifest {
 public:
  Manifest(const RunConfig& cfg, std::string subcommand);

  void add_output(const std::string& run_dir, const std::string& rel_path);
  void add_note(const std::string& key, const std::string& value);

  // Writes manifest.json into the run directory.
  void write(const std::string& run_dir);

 private:
  RunConfig cfg_;
  std::string subcommand_;
  std::string started_at_;
  std::vector<OutputRecord> outputs_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

}  // namespace snse
