#include "scma/med.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "scma/errors.hpp"

namespace scma {
namespace {

void check_pair_index(const SystemDims& dims, std::uint64_t k) {
  const auto count = dims.multiplexed_count();
  if (count == 0) throw CapacityError("M^J exceeds 2^62");
  if (k < 1 || k > count) {
    throw RangeError("multiplexed index " + std::to_string(k) + " outside 1.." +
                     std::to_string(count));
  }
}

}  // namespace

double pair_distance_sq(const CodebookCollection& collection, std::uint64_t k, std::uint64_t l) {
  const auto& dims = collection.dims();
  check_pair_index(dims, k);
  check_pair_index(dims, l);
  if (k == l) return 0.0;
  const auto a = index_to_symbols(k, dims);
  const auto b = index_to_symbols(l, dims);
  CVector diff = CVector::Zero(dims.resources());
  for (int j = 1; j <= dims.users(); ++j) {
    const int mk = a.symbols[j - 1];
    const int ml = b.symbols[j - 1];
    if (mk == ml) continue;
    const auto& rows = dims.support(j);
    const auto& c = collection.constellation(j);
    for (int n = 0; n < dims.nonzeros(); ++n) {
      diff(rows[n] - 1) += c(n, mk - 1) - c(n, ml - 1);
    }
  }
  return diff.squaredNorm();
}

DistanceSummary med(const CodebookCollection& collection, double tie_rel_tol) {
  const auto& dims = collection.dims();
  const std::uint64_t count = dims.multiplexed_count();
  if (count == 0 || count > kMaxEnumerable) {
    throw CapacityError("exhaustive MED needs M^J <= 2^20");
  }
  if (count < 2) throw DegenerateInputError("need at least two multiplexed symbols");

  const CMatrix table = superimposed_codewords(collection);
  const auto total = static_cast<Eigen::Index>(count);
  const Eigen::Index K = dims.resources();

  // Row-major copy keeps each codeword contiguous for the inner loop.
  std::vector<cplx> words(static_cast<std::size_t>(total * K));
  for (Eigen::Index k = 0; k < total; ++k) {
    for (Eigen::Index r = 0; r < K; ++r) words[k * K + r] = table(r, k);
  }

  DistanceSummary out;
  out.pair_count = count * (count - 1) / 2;
  auto dist = [&](Eigen::Index k, Eigen::Index l) {
    const cplx* wk = &words[k * K];
    const cplx* wl = &words[l * K];
    double d = 0.0;
    for (Eigen::Index r = 0; r < K; ++r) d += std::norm(wk[r] - wl[r]);
    return d;
  };
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < total; ++k) {
    for (Eigen::Index l = k + 1; l < total; ++l) best = std::min(best, dist(k, l));
  }
  const double threshold = best * (1.0 + tie_rel_tol);
  for (Eigen::Index k = 0; k < total; ++k) {
    for (Eigen::Index l = k + 1; l < total; ++l) {
      if (dist(k, l) <= threshold) {
        out.argmin_pairs.emplace_back(static_cast<std::uint64_t>(k + 1),
                                      static_cast<std::uint64_t>(l + 1));
      }
    }
  }

  out.d_min_sq = best;
  out.d_min = std::sqrt(best);
  out.symbol_energy = average_symbol_energy(collection);
  out.normalized_d_min = out.symbol_energy > 0 ? out.d_min / std::sqrt(out.symbol_energy) : 0.0;
  return out;
}

int symbol_hamming(std::uint64_t k, std::uint64_t l, const SystemDims& dims) {
  check_pair_index(dims, k);
  check_pair_index(dims, l);
  std::uint64_t a = k - 1;
  std::uint64_t b = l - 1;
  const auto m = static_cast<std::uint64_t>(dims.codebook_size());
  int d = 0;
  for (int j = 0; j < dims.users(); ++j) {
    d += (a % m) != (b % m);
    a /= m;
    b /= m;
  }
  return d;
}

int bit_hamming_index(std::uint64_t k, std::uint64_t l, const SystemDims& dims) {
  check_pair_index(dims, k);
  check_pair_index(dims, l);
  // With natural binary labels the flat index is the concatenation of all bit labels.
  return std::popcount((k - 1) ^ (l - 1));
}

HammingMatrices::HammingMatrices(const SystemDims& dims) : size_(dims.multiplexed_count()) {
  if (size_ == 0 || size_ > kMaxDenseHamming) {
    throw CapacityError("dense Hamming matrices need M^J <= " + std::to_string(kMaxDenseHamming));
  }
  const std::size_t n = size_;
  symbol_.resize(n * n);
  bit_.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      symbol_[k * n + l] = static_cast<std::uint8_t>(symbol_hamming(k + 1, l + 1, dims));
      bit_[k * n + l] = static_cast<std::uint8_t>(std::popcount(k ^ l));
    }
  }
}

std::size_t HammingMatrices::offset(std::uint64_t k, std::uint64_t l) const {
  if (k < 1 || k > size_ || l < 1 || l > size_) throw RangeError("Hamming index out of range");
  return static_cast<std::size_t>((k - 1) * size_ + (l - 1));
}

HammingMatrices hamming_matrices(const SystemDims& dims) { return HammingMatrices(dims); }

}  // namespace scma
