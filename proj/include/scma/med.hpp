#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scma/core.hpp"

namespace scma {

struct DistanceSummary {
  double d_min = 0.0;
  double d_min_sq = 0.0;
  double symbol_energy = 0.0;
  // d_min / sqrt(E_s); zero when E_s is zero.
  double normalized_d_min = 0.0;
  // (k, l) with k < l, ascending.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> argmin_pairs;
  std::uint64_t pair_count = 0;
};

// Largest M^J accepted by the exhaustive scans.
inline constexpr std::uint64_t kMaxEnumerable = std::uint64_t{1} << 20;
// Largest M^J for which dense Hamming matrices are materialized.
inline constexpr std::uint64_t kMaxDenseHamming = 4096;

// ||s_k - s_l||^2 for flat one-based indices.
double pair_distance_sq(const CodebookCollection& collection, std::uint64_t k, std::uint64_t l);

// Exact MED over all C(M^J, 2) pairs. Pairs within `tie_rel_tol` of the minimum
// are reported as ties.
DistanceSummary med(const CodebookCollection& collection, double tie_rel_tol = 1e-12);

// Number of users whose symbols differ between multiplexed symbols k and l.
int symbol_hamming(std::uint64_t k, std::uint64_t l, const SystemDims& dims);
// Number of differing bits under the natural binary map.
int bit_hamming_index(std::uint64_t k, std::uint64_t l, const SystemDims& dims);

class HammingMatrices {
 public:
  explicit HammingMatrices(const SystemDims& dims);

  std::uint64_t size() const noexcept { return size_; }
  // One-based (k, l).
  int symbol(std::uint64_t k, std::uint64_t l) const { return symbol_[offset(k, l)]; }
  int bit(std::uint64_t k, std::uint64_t l) const { return bit_[offset(k, l)]; }

 private:
  std::size_t offset(std::uint64_t k, std::uint64_t l) const;

  std::uint64_t size_;
  std::vector<std::uint8_t> symbol_;
  std::vector<std::uint8_t> bit_;
};

HammingMatrices hamming_matrices(const SystemDims& dims);

}  // namespace scma
