#include "scma/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "scma/errors.hpp"

namespace scma {
namespace {

struct ChunkStats {
  std::uint64_t trials = 0;
  std::uint64_t errors_sym = 0;
  std::uint64_t errors_bit = 0;
  double sq_sym = 0.0;  // sum over blocks of (symbol errors)^2
  double sq_bit = 0.0;

  void merge(const ChunkStats& o) {
    trials += o.trials;
    errors_sym += o.errors_sym;
    errors_bit += o.errors_bit;
    sq_sym += o.sq_sym;
    sq_bit += o.sq_bit;
  }
};

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t point, std::uint64_t chunk,
                       std::uint64_t lane) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point), static_cast<std::uint32_t>(chunk),
                    static_cast<std::uint32_t>(chunk >> 32), static_cast<std::uint32_t>(lane)};
  return std::mt19937_64(seq);
}

class Runner {
 public:
  Runner(const CodebookCollection& collection, const SimulationConfig& config)
      : collection_(collection), config_(config), detector_(collection) {
    const auto& dims = collection.dims();
    K_ = dims.resources();
    J_ = dims.users();
    M_ = dims.codebook_size();
    for (int j = 1; j <= J_; ++j) supports_.push_back(dims.support(j));
  }

  ChunkStats run(std::uint64_t point, std::uint64_t chunk, std::uint64_t blocks,
                 double noise_var) const {
    auto data_rng = stream(config_.seed, point, chunk, 0);
    const bool per_user = config_.scenario == Scenario::uplink_consecutive;
    const bool faded = config_.scenario != Scenario::awgn;
    const int gain_len = per_user ? J_ * K_ : K_;

    // Channels for the whole chunk first, so poor ones can be ranked out.
    std::vector<cplx> gains(blocks * gain_len, cplx(1.0, 0.0));
    std::vector<std::size_t> kept;
    if (faded) {
      std::vector<double> quality(blocks, 0.0);
      std::vector<std::mt19937_64> channel_rng;
      for (int lane = 0; lane < (per_user ? J_ : 1); ++lane) {
        channel_rng.push_back(stream(config_.seed, point, chunk, 1 + lane));
      }
      for (std::uint64_t b = 0; b < blocks; ++b) {
        double q = 0.0;
        for (int lane = 0; lane < static_cast<int>(channel_rng.size()); ++lane) {
          const auto h = draw_channel(config_.ofdm, channel_rng[lane]);
          for (int k = 0; k < K_; ++k) gains[b * gain_len + lane * K_ + k] = h.subcarriers(k);
          q += h.subcarriers.squaredNorm();
        }
        quality[b] = std::sqrt(q);
      }
      kept = exclude_poor_channels(quality, config_.exclusion);
    } else {
      kept.resize(blocks);
      for (std::uint64_t b = 0; b < blocks; ++b) kept[b] = b;
    }

    std::uniform_int_distribution<int> symbol(0, M_ - 1);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_var / 2.0));
    Detector::Workspace ws;
    DetectionResult decision;
    std::vector<int> sent(J_);
    std::vector<cplx> r(K_);
    ChunkStats stats;
    // Symbols and noise are drawn for every block (kept or not) so the data stream
    // does not depend on the exclusion outcome.
    std::size_t next = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
      for (int& m : sent) m = symbol(data_rng);
      for (int k = 0; k < K_; ++k) {
        const double re = gauss(data_rng);
        const double im = gauss(data_rng);
        r[k] = cplx(re, im);
      }
      if (next >= kept.size() || kept[next] != b) continue;
      ++next;
      const std::span<const cplx> g(gains.data() + b * gain_len, gain_len);
      for (int j = 0; j < J_; ++j) {
        const CMatrix& C = collection_.constellation(j + 1);
        for (std::size_t n = 0; n < supports_[j].size(); ++n) {
          const int k = supports_[j][n] - 1;
          r[k] += g[per_user ? j * K_ + k : k] * C(static_cast<Eigen::Index>(n), sent[j]);
        }
      }
      switch (config_.detector) {
        case DetectorKind::joint_map: detector_.joint_map(r, g, noise_var, ws, decision); break;
        case DetectorKind::marginal_map: detector_.marginal_map(r, g, noise_var, ws, decision); break;
        case DetectorKind::mpa: detector_.mpa(r, g, noise_var, config_.mpa, ws, decision); break;
      }
      int es = 0;
      int eb = 0;
      for (int j = 0; j < J_; ++j) {
        if (decision.symbols[j] != sent[j] + 1) {
          ++es;
          eb += bit_hamming(decision.symbols[j], sent[j] + 1);
        }
      }
      ++stats.trials;
      stats.errors_sym += es;
      stats.errors_bit += eb;
      stats.sq_sym += static_cast<double>(es) * es;
      stats.sq_bit += static_cast<double>(eb) * eb;
    }
    return stats;
  }

 private:
  const CodebookCollection& collection_;
  const SimulationConfig& config_;
  Detector detector_;
  int K_ = 0;
  int J_ = 0;
  int M_ = 0;
  std::vector<std::vector<int>> supports_;
};

bool stop_reached(const StopRule& rule, const ChunkStats& s) {
  const std::uint64_t events = rule.count_bit_errors ? s.errors_bit : s.errors_sym;
  if (rule.min_errors > 0 && events >= rule.min_errors) return true;
  return rule.max_trials > 0 && s.trials >= rule.max_trials;
}

double stderr_of(double sum, double sq, std::uint64_t n, double per_block) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, (sq / static_cast<double>(n) - mean * mean)) *
                     static_cast<double>(n) / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n)) / per_block;
}

}  // namespace

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::awgn: return "awgn";
    case Scenario::downlink_consecutive: return "downlink-consecutive";
    case Scenario::downlink_separated: return "downlink-separated";
    case Scenario::uplink_consecutive: return "uplink-consecutive";
  }
  return "?";
}

std::string to_string(DetectorKind detector) {
  switch (detector) {
    case DetectorKind::joint_map: return "joint-map";
    case DetectorKind::marginal_map: return "marginal-map";
    case DetectorKind::mpa: return "mpa";
  }
  return "?";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "dl") return Scenario::downlink_consecutive;
  if (name == "dl-sep") return Scenario::downlink_separated;
  if (name == "ul") return Scenario::uplink_consecutive;
  for (auto s : {Scenario::awgn, Scenario::downlink_consecutive, Scenario::downlink_separated,
                 Scenario::uplink_consecutive}) {
    if (to_string(s) == name) return s;
  }
  throw ParameterError("unknown scenario '" + name + "' (awgn, dl, dl-sep, ul)");
}

DetectorKind parse_detector(const std::string& name) {
  if (name == "map") return DetectorKind::joint_map;
  if (name == "marginal") return DetectorKind::marginal_map;
  for (auto d : {DetectorKind::joint_map, DetectorKind::marginal_map, DetectorKind::mpa}) {
    if (to_string(d) == name) return d;
  }
  throw ParameterError("unknown detector '" + name + "' (map, marginal, mpa)");
}

double noise_variance(const CodebookCollection& collection, double ebn0_db) {
  if (!std::isfinite(ebn0_db)) throw ParameterError("Eb/N0 must be finite");
  const double eb = average_bit_energy(collection);
  if (!(eb > 0.0)) throw DegenerateInputError("collection has zero energy");
  return eb / std::pow(10.0, ebn0_db / 10.0);
}

void SimulationConfig::validate(const SystemDims& dims) const {
  if (ebn0_db.empty()) throw ParameterError("Eb/N0 grid is empty");
  for (double e : ebn0_db) {
    if (!std::isfinite(e)) throw ParameterError("Eb/N0 grid must be finite");
  }
  if (stop.min_errors == 0 && stop.max_trials == 0) {
    throw ParameterError("stop rule can never be satisfied (no error target and no trial cap)");
  }
  if (!(exclusion >= 0.0 && exclusion < 1.0)) throw RangeError("exclusion fraction must lie in [0, 1)");
  if (scenario == Scenario::awgn && exclusion > 0.0) {
    throw ParameterError("channel exclusion needs a fading scenario");
  }
  if (chunk_size < 1) throw ParameterError("chunk size must be positive");
  if (detector == DetectorKind::mpa && mpa.iterations < 1) {
    throw ParameterError("MPA needs at least one iteration");
  }
  if (scenario != Scenario::awgn) ofdm.validate(dims.resources());
}

ErrorCurve simulate(const CodebookCollection& collection, const SimulationConfig& config,
                    const ProgressFn& progress) {
  const auto& dims = collection.dims();
  config.validate(dims);
  const Runner runner(collection, config);
  const unsigned threads =
      config.threads > 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());

  ErrorCurve curve;
  curve.metadata = {{"scenario", to_string(config.scenario)},
                    {"detector", to_string(config.detector)},
                    {"seed", std::to_string(config.seed)},
                    {"exclusion", std::to_string(config.exclusion)},
                    {"min_errors", std::to_string(config.stop.min_errors)},
                    {"max_trials", std::to_string(config.stop.max_trials)},
                    {"users", std::to_string(dims.users())},
                    {"codebook_size", std::to_string(dims.codebook_size())}};
  if (config.detector == DetectorKind::mpa) {
    curve.metadata.emplace_back("mpa_iterations", std::to_string(config.mpa.iterations));
  }

  for (std::size_t p = 0; p < config.ebn0_db.size(); ++p) {
    const double n0 = noise_variance(collection, config.ebn0_db[p]);
    ChunkStats total;
    std::uint64_t chunk = 0;
    bool done = false;
    // Rounds of `threads` chunks; merged in chunk order so the result does not
    // depend on the thread count.
    while (!done) {
      std::vector<ChunkStats> round(threads);
      std::vector<std::uint64_t> sizes(threads, 0);
      for (unsigned t = 0; t < threads; ++t) {
        std::uint64_t size = config.chunk_size;
        if (config.stop.max_trials > 0 && config.exclusion == 0.0) {
          const std::uint64_t start = (chunk + t) * config.chunk_size;
          size = start >= config.stop.max_trials ? 0
                                                  : std::min(size, config.stop.max_trials - start);
        }
        sizes[t] = size;
      }
      auto work = [&](unsigned t) {
        if (sizes[t] > 0) round[t] = runner.run(p, chunk + t, sizes[t], n0);
      };
      if (threads == 1) {
        work(0);
      } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
      }
      for (unsigned t = 0; t < threads && !done; ++t) {
        if (sizes[t] == 0) {
          done = true;
          break;
        }
        total.merge(round[t]);
        done = stop_reached(config.stop, total);
      }
      chunk += threads;
    }

    ErrorPoint pt;
    pt.ebn0_db = config.ebn0_db[p];
    pt.noise_var = n0;
    pt.trials = total.trials;
    pt.errors_sym = total.errors_sym;
    pt.errors_bit = total.errors_bit;
    const double per_sym = dims.users();
    const double per_bit = static_cast<double>(dims.users()) * dims.bits_per_symbol();
    if (total.trials > 0) {
      pt.ser = static_cast<double>(total.errors_sym) / (per_sym * static_cast<double>(total.trials));
      pt.ber = static_cast<double>(total.errors_bit) / (per_bit * static_cast<double>(total.trials));
      pt.ser_stderr = stderr_of(static_cast<double>(total.errors_sym), total.sq_sym, total.trials, per_sym);
      pt.ber_stderr = stderr_of(static_cast<double>(total.errors_bit), total.sq_bit, total.trials, per_bit);
    }
    curve.points.push_back(pt);
    if (progress) progress(pt);
  }
  return curve;
}

void write_csv(std::ostream& out, const ErrorCurve& curve) {
  for (const auto& [key, value] : curve.metadata) out << "# " << key << ": " << value << '\n';
  out << "ebn0_db,ser,ber,ser_stderr,ber_stderr,trials,errors_sym,errors_bit\n";
  out << std::setprecision(10);
  for (const auto& p : curve.points) {
    out << p.ebn0_db << ',' << p.ser << ',' << p.ber << ',';
    if (curve.has_statistics) {
      out << p.ser_stderr << ',' << p.ber_stderr << ',' << p.trials << ',' << p.errors_sym << ','
          << p.errors_bit;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

ErrorCurve read_csv(std::istream& in) {
  ErrorCurve curve;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto value = line.substr(colon + 1);
        value.erase(0, value.find_first_not_of(' '));
        curve.metadata.emplace_back(line.substr(2, colon - 2), value);
      }
      continue;
    }
    if (!header) {
      if (line != "ebn0_db,ser,ber,ser_stderr,ber_stderr,trials,errors_sym,errors_bit") {
        throw SchemaError("", "unexpected CSV header: " + line);
      }
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    while (f.size() < 8) f.emplace_back();
    ErrorPoint p;
    try {
      p.ebn0_db = std::stod(f[0]);
      p.ser = std::stod(f[1]);
      p.ber = std::stod(f[2]);
      if (!f[3].empty()) {
        p.ser_stderr = std::stod(f[3]);
        p.ber_stderr = std::stod(f[4]);
        p.trials = std::stoull(f[5]);
        p.errors_sym = std::stoull(f[6]);
        p.errors_bit = std::stoull(f[7]);
      } else {
        curve.has_statistics = false;
      }
    } catch (const std::exception&) {
      throw SchemaError("", "malformed CSV row: " + line);
    }
    curve.points.push_back(p);
  }
  if (!header) throw SchemaError("", "CSV header missing");
  return curve;
}

}  // namespace scma
