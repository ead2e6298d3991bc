#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "scma/core.hpp"

namespace scma {

struct OfdmConfig {
  int fft_size = 256;
  int cp_length = 17;
  int taps = 18;
  std::vector<int> subcarriers{127, 128, 129, 130};  // one-based

  static OfdmConfig consecutive(int resources, int start = 127);
  static OfdmConfig separated(std::vector<int> subcarriers);

  // Throws ParameterError for N_CP < L - 1 unless allow_isi is set.
  void validate(int resources, bool allow_isi = false) const;
};

struct ChannelRealization {
  CVector taps;         // h, L entries
  CVector subcarriers;  // h^f at the assigned subcarriers, K entries
};

// Tap standard deviations: 0 dB .. -48 dB linearly spaced (amplitude), unit l2 norm.
std::vector<double> tap_profile(int taps);

ChannelRealization draw_channel(const OfdmConfig& config, std::mt19937_64& rng);

// h^f[i] = sum_l h[l] exp(-2 pi j (i-1) l / N) at the given one-based indices.
CVector channel_response(const CVector& taps, int fft_size, const std::vector<int>& indices);
CVector channel_response(const CVector& taps, int fft_size);

// Unitary DFT pair (1/sqrt(N) scaling).
CVector unitary_dft(const CVector& x);
CVector unitary_idft(const CVector& X);

// Keeps the realizations with the largest ||h^f_sub||_2, dropping floor(q * n) of them.
// Returns the retained indices in ascending order.
std::vector<std::size_t> exclude_poor_channels(const std::vector<ChannelRealization>& realizations,
                                               double fraction);
std::vector<std::size_t> exclude_poor_channels(const std::vector<double>& quality,
                                               double fraction);

// i.i.d. CN(0, variance) symbols for every subcarrier not used by SCMA,
// variance = J E_s / K.
CVector other_subcarrier_load(const OfdmConfig& config, double variance, std::mt19937_64& rng);

struct TimeDomainCheck {
  CVector frequency_path;
  CVector time_path;
  double relative_difference = 0.0;
};

// Sends two consecutive OFDM blocks through IDFT, cyclic prefix, FIR channel,
// CP removal and DFT, and compares the second block's SCMA subcarriers with
// diag(h^f_sub) s + n from the frequency-domain model.
TimeDomainCheck validate_time_domain(const CodebookCollection& collection,
                                     const OfdmConfig& config, double noise_var,
                                     std::uint64_t seed, bool allow_isi = false);

}  // namespace scma
