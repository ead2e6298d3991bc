#include "scma/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "scma/errors.hpp"

namespace scma {
namespace {

cplx complex_normal(std::mt19937_64& rng, double variance) {
  std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

CVector dft(const CVector& x, double sign) {
  const auto n = x.size();
  CVector out = CVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index t = 0; t < n; ++t) {
      const double phase = sign * 2.0 * std::numbers::pi * static_cast<double>((i * t) % n) /
                           static_cast<double>(n);
      out(i) += x(t) * std::polar(1.0, phase);
    }
  }
  return out / std::sqrt(static_cast<double>(n));
}

}  // namespace

OfdmConfig OfdmConfig::consecutive(int resources, int start) {
  OfdmConfig c;
  c.subcarriers.resize(resources);
  std::iota(c.subcarriers.begin(), c.subcarriers.end(), start);
  return c;
}

OfdmConfig OfdmConfig::separated(std::vector<int> subcarriers) {
  OfdmConfig c;
  c.subcarriers = std::move(subcarriers);
  return c;
}

void OfdmConfig::validate(int resources, bool allow_isi) const {
  if (fft_size < 1) throw ParameterError("FFT size must be positive");
  if (taps < 1) throw ParameterError("channel needs at least one tap");
  if (cp_length < 0) throw ParameterError("cyclic prefix length must be nonnegative");
  if (!allow_isi && cp_length < taps - 1) {
    throw ParameterError("cyclic prefix " + std::to_string(cp_length) + " shorter than L-1 = " +
                         std::to_string(taps - 1) + " causes inter-block interference");
  }
  if (static_cast<int>(subcarriers.size()) != resources) {
    throw ParameterError("need exactly K = " + std::to_string(resources) + " subcarriers");
  }
  std::set<int> seen;
  for (int i : subcarriers) {
    if (i < 1 || i > fft_size) throw RangeError("subcarrier index outside 1..N_B");
    if (!seen.insert(i).second) throw ParameterError("subcarrier indices must be distinct");
  }
}

std::vector<double> tap_profile(int taps) {
  if (taps < 1) throw ParameterError("channel needs at least one tap");
  std::vector<double> sigma(taps);
  for (int l = 0; l < taps; ++l) {
    const double db = taps == 1 ? 0.0 : -48.0 * l / (taps - 1);
    sigma[l] = std::pow(10.0, db / 20.0);
  }
  const double norm = std::sqrt(std::inner_product(sigma.begin(), sigma.end(), sigma.begin(), 0.0));
  for (double& s : sigma) s /= norm;
  return sigma;
}

CVector channel_response(const CVector& taps, int fft_size, const std::vector<int>& indices) {
  if (fft_size < 1) throw ParameterError("FFT size must be positive");
  CVector out(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 1 || indices[k] > fft_size) throw RangeError("subcarrier index outside 1..N_B");
    cplx acc(0.0, 0.0);
    for (Eigen::Index l = 0; l < taps.size(); ++l) {
      const auto cycle = ((indices[k] - 1) * l) % fft_size;
      acc += taps(l) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(cycle) / fft_size);
    }
    out(static_cast<Eigen::Index>(k)) = acc;
  }
  return out;
}

CVector channel_response(const CVector& taps, int fft_size) {
  std::vector<int> all(fft_size);
  std::iota(all.begin(), all.end(), 1);
  return channel_response(taps, fft_size, all);
}

ChannelRealization draw_channel(const OfdmConfig& config, std::mt19937_64& rng) {
  const auto sigma = tap_profile(config.taps);
  ChannelRealization h;
  h.taps.resize(config.taps);
  for (int l = 0; l < config.taps; ++l) h.taps(l) = complex_normal(rng, sigma[l] * sigma[l]);
  h.subcarriers = channel_response(h.taps, config.fft_size, config.subcarriers);
  return h;
}

CVector unitary_dft(const CVector& x) { return dft(x, -1.0); }
CVector unitary_idft(const CVector& X) { return dft(X, 1.0); }

std::vector<std::size_t> exclude_poor_channels(const std::vector<double>& quality,
                                               double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw RangeError("exclusion fraction must lie in [0, 1)");
  std::vector<std::size_t> order(quality.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return quality[a] < quality[b]; });
  const auto drop = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(quality.size())));
  std::vector<std::size_t> kept(order.begin() + static_cast<std::ptrdiff_t>(drop), order.end());
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<std::size_t> exclude_poor_channels(const std::vector<ChannelRealization>& realizations,
                                               double fraction) {
  std::vector<double> quality;
  quality.reserve(realizations.size());
  for (const auto& h : realizations) quality.push_back(h.subcarriers.norm());
  return exclude_poor_channels(quality, fraction);
}

CVector other_subcarrier_load(const OfdmConfig& config, double variance, std::mt19937_64& rng) {
  CVector X = CVector::Zero(config.fft_size);
  std::set<int> scma(config.subcarriers.begin(), config.subcarriers.end());
  for (int i = 1; i <= config.fft_size; ++i) {
    if (!scma.contains(i)) X(i - 1) = complex_normal(rng, variance);
  }
  return X;
}

TimeDomainCheck validate_time_domain(const CodebookCollection& collection,
                                     const OfdmConfig& config, double noise_var,
                                     std::uint64_t seed, bool allow_isi) {
  const auto& dims = collection.dims();
  config.validate(dims.resources(), allow_isi);
  if (noise_var < 0.0) throw ParameterError("noise variance must be nonnegative");
  std::mt19937_64 rng(seed);
  const int NB = config.fft_size;
  const int cp = config.cp_length;
  const double load = dims.users() * average_symbol_energy(collection) / dims.resources();

  const auto h = draw_channel(config, rng);
  std::uniform_int_distribution<int> symbol(1, dims.codebook_size());
  auto block = [&]() {
    std::vector<int> m(dims.users());
    for (int& x : m) x = symbol(rng);
    const CVector s = superimpose(collection, m);
    CVector X = other_subcarrier_load(config, load, rng);
    for (int k = 0; k < dims.resources(); ++k) X(config.subcarriers[k] - 1) = s(k);
    return std::pair{X, s};
  };
  const CVector X_prev = block().first;
  const auto [X, s] = block();

  // Serial stream: [CP | block 1][CP | block 2].
  auto with_cp = [&](const CVector& freq) {
    const CVector x = unitary_idft(freq);
    CVector out(NB + cp);
    out << x.tail(cp), x;
    return out;
  };
  CVector stream(2 * (NB + cp));
  stream << with_cp(X_prev), with_cp(X);

  CVector received = CVector::Zero(stream.size());
  for (Eigen::Index t = 0; t < stream.size(); ++t) {
    for (Eigen::Index l = 0; l < h.taps.size() && l <= t; ++l) received(t) += h.taps(l) * stream(t - l);
  }
  CVector noise(NB);
  for (int t = 0; t < NB; ++t) noise(t) = noise_var > 0.0 ? complex_normal(rng, noise_var) : cplx(0.0, 0.0);
  const CVector y = received.segment(NB + cp + cp, NB) + noise;
  const CVector Y = unitary_dft(y);
  const CVector Nf = unitary_dft(noise);

  TimeDomainCheck out;
  out.time_path.resize(dims.resources());
  out.frequency_path.resize(dims.resources());
  for (int k = 0; k < dims.resources(); ++k) {
    const int i = config.subcarriers[k] - 1;
    out.time_path(k) = Y(i);
    out.frequency_path(k) = h.subcarriers(k) * s(k) + Nf(i);
  }
  out.relative_difference =
      (out.time_path - out.frequency_path).norm() / std::max(out.frequency_path.norm(), 1e-300);
  return out;
}

}  // namespace scma
