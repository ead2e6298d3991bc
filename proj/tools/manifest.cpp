#include "manifest.hpp"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "scma/errors.hpp"

namespace scma::cli {

std::string tool_version() { return SCMA_VERSION; }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%FT%TZ");
  return os.str();
}

nlohmann::json RunManifest::to_json(bool with_timing) const {
  nlohmann::json j;
  j["command"] = command;
  j["arguments"] = arguments;
  j["config"] = config;
  j["seeds"] = seeds;
  j["tool_version"] = tool_version();
  auto& in = j["inputs"] = nlohmann::json::array();
  for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"fnv1a64", digest}});
  if (with_timing) {
    j["started_at"] = started_at;
    j["wall_seconds"] = wall_seconds;
  }
  return j;
}

std::filesystem::path RunManifest::write_beside(const std::filesystem::path& artifact) const {
  std::filesystem::path path = artifact;
  path += ".manifest.json";
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path.string() + "'");
  out << to_json(true).dump(2) << '\n';
  return path;
}

}  // namespace scma::cli
