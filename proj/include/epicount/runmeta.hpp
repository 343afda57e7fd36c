#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace epicount {

/// FNV-1a over raw bytes; stable across platforms.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string digest_hex(const std::string& content);
std::string file_digest(const std::string& path);

/// Provenance record written next to every primary output.
struct RunManifest {
  std::string command;                       // argv joined
  std::string config_digest;                 // canonical config JSON
  std::vector<std::pair<std::string, std::string>> input_digests;  // (path, digest)
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string version;
  double duration_seconds = 0.0;

  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

/// Writes content to a temporary file in the target directory, then renames
/// over the destination.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace epicount
