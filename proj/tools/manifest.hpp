#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace scma::cli {

std::string tool_version();

// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  double wall_seconds = 0.0;
  std::string started_at;  // UTC, ISO 8601

  // Without timing the result is a pure function of the command line and inputs.
  nlohmann::json to_json(bool with_timing) const;
  // Writes `<artifact>.manifest.json` and returns its path.
  std::filesystem::path write_beside(const std::filesystem::path& artifact) const;
};

std::string utc_timestamp();

}  // namespace scma::cli
