#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "scma/core.hpp"

namespace scma {

struct Triplet {
  int row;
  int col;
  double value;
  bool operator==(const Triplet&) const = default;
  auto operator<=>(const Triplet&) const = default;
};

// Real symmetric matrix stored as its upper triangle (row <= col), sorted.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix(int dim, std::vector<Triplet> upper);

  int dim() const noexcept { return dim_; }
  const std::vector<Triplet>& upper() const noexcept { return upper_; }

  Eigen::MatrixXd dense() const;
  // x^H A x
  double quadratic_form(const CVector& x) const;
  // Re tr(A X) for Hermitian X.
  double trace_product(const CMatrix& X) const;

  bool operator==(const SparseSymmetricMatrix&) const = default;

 private:
  int dim_;
  std::vector<Triplet> upper_;
};

// Coordinate-triplet text, one "row col value" line per upper-triangle entry (one-based).
void write_triplets(std::ostream& out, const SparseSymmetricMatrix& matrix);

// Zero-based position of entry (n, m) of C_j inside vec([C_1 ... C_J]).
int vec_index(const SystemDims& dims, int user, int symbol, int row);

CVector vectorize(const CodebookCollection& collection);
CodebookCollection devectorize(const CVector& x, const SystemDims& dims);

SparseSymmetricMatrix build_power_matrix(int user, const SystemDims& dims);

// A_{k,l} = sum_r g_r g_r^T where g_r has +-1 entries; each row of the factor lists
// (vector index, sign) pairs. Rows with no entries are omitted.
struct DistanceFactor {
  std::vector<std::vector<std::pair<int, int>>> rows;

  // sum_r g_r^T X g_r
  double trace_product(const CMatrix& X) const;
  Eigen::MatrixXd dense(int dim) const;
};

DistanceFactor build_distance_factor(std::uint64_t k, std::uint64_t l, const SystemDims& dims);
SparseSymmetricMatrix build_distance_matrix(std::uint64_t k, std::uint64_t l,
                                            const SystemDims& dims);

// C(M^J, 2); throws CapacityError when it does not fit in 64 bits.
std::uint64_t constraint_count(const SystemDims& dims);

// Colexicographic bijection between one-based pair index i and (k, l) with k < l.
std::uint64_t pair_index(std::uint64_t k, std::uint64_t l);
std::pair<std::uint64_t, std::uint64_t> pair_from_index(std::uint64_t i);

class QcqpInstance {
 public:
  QcqpInstance(SystemDims dims, double power_budget);

  const SystemDims& dims() const noexcept { return dims_; }
  double power_budget() const noexcept { return power_budget_; }
  int dim() const noexcept { return dims_.vector_length(); }
  std::uint64_t pair_count() const noexcept { return pair_count_; }
  // tr(B_j X) target: M * P.
  double power_target() const noexcept { return dims_.codebook_size() * power_budget_; }

  const std::vector<SparseSymmetricMatrix>& power_matrices() const noexcept { return power_; }
  SparseSymmetricMatrix distance_matrix(std::uint64_t i) const;
  DistanceFactor distance_factor(std::uint64_t i) const;

 private:
  SystemDims dims_;
  double power_budget_;
  std::uint64_t pair_count_;
  std::vector<SparseSymmetricMatrix> power_;
};

// Evaluates tr(A_i X) for every pair in O(K) per pair using per-resource lookup
// tables over the symbols of the users sharing each resource.
class PairTraceTable {
 public:
  PairTraceTable(const SystemDims& dims, const CMatrix& X);

  double operator()(std::uint64_t k, std::uint64_t l) const;

  // Visits every pair k < l as f(k, l, value) in ascending colex order.
  template <typename F>
  void for_each_pair(F&& f) const;

 private:
  struct Resource {
    std::vector<int> users;  // zero-based
    std::uint64_t local_count;  // M^(users on this resource)
    std::vector<double> table;  // local_count x local_count, row = k code
  };
  std::uint64_t local_code(const Resource& res, std::uint64_t k0) const;

  SystemDims dims_;
  std::vector<Resource> resources_;
};

template <typename F>
void PairTraceTable::for_each_pair(F&& f) const {
  const std::uint64_t count = dims_.multiplexed_count();
  const std::size_t R = resources_.size();
  std::vector<std::uint64_t> codes(count * R);
  for (std::uint64_t k = 0; k < count; ++k) {
    for (std::size_t r = 0; r < R; ++r) codes[k * R + r] = local_code(resources_[r], k);
  }
  for (std::uint64_t l = 1; l < count; ++l) {
    const std::uint64_t* cl = &codes[l * R];
    for (std::uint64_t k = 0; k < l; ++k) {
      const std::uint64_t* ck = &codes[k * R];
      double v = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        const auto& res = resources_[r];
        v += res.table[ck[r] * res.local_count + cl[r]];
      }
      f(k + 1, l + 1, v);
    }
  }
}

}  // namespace scma
