#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "scma/core.hpp"
#include "scma/detect.hpp"
#include "scma/ofdm.hpp"

namespace scma {

enum class Scenario { awgn, downlink_consecutive, downlink_separated, uplink_consecutive };
enum class DetectorKind { joint_map, marginal_map, mpa };

std::string to_string(Scenario scenario);
std::string to_string(DetectorKind detector);
// Accepts the full names and the short forms awgn, dl, dl-sep, ul / map, marginal, mpa.
Scenario parse_scenario(const std::string& name);
DetectorKind parse_detector(const std::string& name);

// N0 = E_b / 10^(EbN0/10) with E_b from the collection.
double noise_variance(const CodebookCollection& collection, double ebn0_db);

struct StopRule {
  std::uint64_t min_errors = 400;         // 0 disables
  std::uint64_t max_trials = 10'000'000;  // 0 disables
  bool count_bit_errors = true;           // otherwise symbol errors are the events
};

struct SimulationConfig {
  Scenario scenario = Scenario::awgn;
  DetectorKind detector = DetectorKind::mpa;
  std::vector<double> ebn0_db;
  StopRule stop;
  std::uint64_t seed = 1;
  double exclusion = 0.0;  // fraction of poorest channels dropped per chunk
  OfdmConfig ofdm;         // subcarriers default to the consecutive assignment
  MpaOptions mpa;
  unsigned threads = 0;    // 0 = hardware concurrency
  std::uint64_t chunk_size = 4096;

  void validate(const SystemDims& dims) const;
};

struct ErrorPoint {
  double ebn0_db = 0.0;
  double noise_var = 0.0;
  double ser = 0.0;
  double ber = 0.0;
  double ser_stderr = 0.0;
  double ber_stderr = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors_sym = 0;
  std::uint64_t errors_bit = 0;
};

struct ErrorCurve {
  std::vector<ErrorPoint> points;
  std::vector<std::pair<std::string, std::string>> metadata;
  bool has_statistics = true;  // false for analytic curves: only ser/ber are filled
};

using ProgressFn = std::function<void(const ErrorPoint&)>;

ErrorCurve simulate(const CodebookCollection& collection, const SimulationConfig& config,
                    const ProgressFn& progress = {});

// Columns ebn0_db, ser, ber, ser_stderr, ber_stderr, trials, errors_sym,
// errors_bit after '#'-prefixed metadata lines.
void write_csv(std::ostream& out, const ErrorCurve& curve);
ErrorCurve read_csv(std::istream& in);

}  // namespace scma
