#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scma {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// A user attached to a resource, with the position of that resource inside the
// user's length-N support (zero-based row of C_j).
struct UserSlot {
  int user;  // one-based
  int row;   // zero-based row of the constellation matrix
};

// System dimensions plus the mapping matrices, each stored as the one-based
// list of the N resource rows it selects.
class SystemDims {
 public:
  SystemDims(int resources, int nonzeros, int codebook_size, int users,
             std::vector<std::vector<int>> mapping);

  // K = 4, N = 2, M = 4 with the first `users` entries of the standard
  // six-user mapping {1,2} {3,4} {1,3} {2,4} {1,4} {2,3}.
  static SystemDims standard(int users);

  int resources() const noexcept { return resources_; }
  int nonzeros() const noexcept { return nonzeros_; }
  int codebook_size() const noexcept { return codebook_size_; }
  int users() const noexcept { return users_; }
  int bits_per_symbol() const noexcept { return bits_per_symbol_; }
  double loading_factor() const noexcept {
    return static_cast<double>(users_) / resources_;
  }
  // Length of vec([C_1 ... C_J]).
  int vector_length() const noexcept { return nonzeros_ * codebook_size_ * users_; }
  // M^J.
  std::uint64_t multiplexed_count() const noexcept { return multiplexed_count_; }

  // One-based resource rows selected by V_j.
  const std::vector<int>& support(int user) const;
  const std::vector<std::vector<int>>& mapping() const noexcept { return mapping_; }
  // Users whose support contains resource r (one-based), in increasing user order.
  const std::vector<UserSlot>& users_on(int resource) const;

  bool operator==(const SystemDims& other) const;

 private:
  int resources_;
  int nonzeros_;
  int codebook_size_;
  int users_;
  int bits_per_symbol_;
  std::uint64_t multiplexed_count_;
  std::vector<std::vector<int>> mapping_;
  std::vector<std::vector<UserSlot>> users_on_;
};

class CodebookCollection {
 public:
  CodebookCollection(SystemDims dims, std::vector<CMatrix> constellations);
  static CodebookCollection zeros(const SystemDims& dims);

  const SystemDims& dims() const noexcept { return dims_; }
  // C_j, N x M, one-based user index.
  const CMatrix& constellation(int user) const;
  const std::vector<CMatrix>& constellations() const noexcept { return constellations_; }

  // (1/M) tr(C_j^H C_j)
  double user_power(int user) const;
  double max_user_power() const;
  bool is_power_normalized(double budget, double rel_tol = 1e-9) const;

  CodebookCollection scaled(cplx factor) const;

 private:
  SystemDims dims_;
  std::vector<CMatrix> constellations_;
};

struct MultiplexedSymbol {
  std::uint64_t index;       // 1..M^J
  std::vector<int> symbols;  // per user, 1..M
};

MultiplexedSymbol index_to_symbols(std::uint64_t index, const SystemDims& dims);
std::uint64_t symbols_to_index(std::span<const int> symbols, const SystemDims& dims);

// Natural binary map: m = 1 + sum_i 2^(i-1) b_i.
int bits_to_symbol(std::span<const int> bits);
std::vector<int> symbol_to_bits(int symbol, int bits_per_symbol);
// Number of differing bits between the labels of two symbols.
int bit_hamming(int symbol_a, int symbol_b);

// V_j C_j e_m
CVector encode(const CodebookCollection& collection, int user, int symbol);
CVector superimpose(const CodebookCollection& collection, std::span<const int> symbols);
CVector superimpose(const CodebookCollection& collection, const MultiplexedSymbol& symbol);

// All M^J superimposed codewords as the columns of a K x M^J matrix
// (column k-1 holds codeword k).
CMatrix superimposed_codewords(const CodebookCollection& collection);

double average_symbol_energy(const CodebookCollection& collection);
double average_bit_energy(const CodebookCollection& collection);

// Common positive scaling so that the largest per-user power equals `budget`.
CodebookCollection normalize_power(const CodebookCollection& collection, double budget);
// Independent per-user scaling so that every user's power equals `budget`.
CodebookCollection normalize_each_user(const CodebookCollection& collection, double budget);

}  // namespace scma
