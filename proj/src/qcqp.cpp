#include "scma/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "scma/errors.hpp"

namespace scma {

SparseSymmetricMatrix::SparseSymmetricMatrix(int dim, std::vector<Triplet> upper)
    : dim_(dim), upper_(std::move(upper)) {
  for (const auto& t : upper_) {
    if (t.row < 0 || t.col < 0 || t.row >= dim || t.col >= dim || t.row > t.col) {
      throw ParameterError("triplet outside the upper triangle");
    }
  }
  std::sort(upper_.begin(), upper_.end());
  for (std::size_t i = 1; i < upper_.size(); ++i) {
    if (upper_[i].row == upper_[i - 1].row && upper_[i].col == upper_[i - 1].col) {
      throw ParameterError("duplicate coordinate in sparse matrix");
    }
  }
}

Eigen::MatrixXd SparseSymmetricMatrix::dense() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& t : upper_) {
    A(t.row, t.col) = t.value;
    A(t.col, t.row) = t.value;
  }
  return A;
}

double SparseSymmetricMatrix::quadratic_form(const CVector& x) const {
  if (x.size() != dim_) throw ParameterError("vector length does not match matrix dimension");
  double v = 0.0;
  for (const auto& t : upper_) {
    const double term = (std::conj(x(t.row)) * x(t.col)).real();
    v += t.row == t.col ? t.value * term : 2.0 * t.value * term;
  }
  return v;
}

double SparseSymmetricMatrix::trace_product(const CMatrix& X) const {
  if (X.rows() != dim_ || X.cols() != dim_) throw ParameterError("matrix dimension mismatch");
  double v = 0.0;
  for (const auto& t : upper_) {
    v += t.row == t.col ? t.value * X(t.row, t.row).real()
                        : t.value * (X(t.row, t.col) + X(t.col, t.row)).real();
  }
  return v;
}

void write_triplets(std::ostream& out, const SparseSymmetricMatrix& matrix) {
  out << "# dim " << matrix.dim() << '\n';
  for (const auto& t : matrix.upper()) {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
  }
}

int vec_index(const SystemDims& dims, int user, int symbol, int row) {
  if (user < 1 || user > dims.users()) throw RangeError("user index out of range");
  if (symbol < 1 || symbol > dims.codebook_size()) throw RangeError("symbol out of range");
  if (row < 1 || row > dims.nonzeros()) throw RangeError("constellation row out of range");
  const int N = dims.nonzeros();
  const int M = dims.codebook_size();
  return (user - 1) * N * M + (symbol - 1) * N + (row - 1);
}

CVector vectorize(const CodebookCollection& collection) {
  const auto& dims = collection.dims();
  const int block = dims.nonzeros() * dims.codebook_size();
  CVector x(dims.vector_length());
  for (int j = 0; j < dims.users(); ++j) {
    const auto& c = collection.constellations()[j];
    x.segment(j * block, block) = Eigen::Map<const CVector>(c.data(), block);
  }
  return x;
}

CodebookCollection devectorize(const CVector& x, const SystemDims& dims) {
  if (x.size() != dims.vector_length()) {
    throw ParameterError("vector length " + std::to_string(x.size()) + " does not match N*M*J = " +
                         std::to_string(dims.vector_length()));
  }
  const int N = dims.nonzeros();
  const int M = dims.codebook_size();
  std::vector<CMatrix> c;
  c.reserve(dims.users());
  for (int j = 0; j < dims.users(); ++j) {
    c.emplace_back(Eigen::Map<const CMatrix>(x.data() + j * N * M, N, M));
  }
  return CodebookCollection(dims, std::move(c));
}

SparseSymmetricMatrix build_power_matrix(int user, const SystemDims& dims) {
  if (user < 1 || user > dims.users()) throw RangeError("user index out of range");
  const int block = dims.nonzeros() * dims.codebook_size();
  std::vector<Triplet> t;
  for (int i = 0; i < block; ++i) {
    const int p = (user - 1) * block + i;
    t.push_back({p, p, 1.0});
  }
  return SparseSymmetricMatrix(dims.vector_length(), std::move(t));
}

double DistanceFactor::trace_product(const CMatrix& X) const {
  double v = 0.0;
  for (const auto& g : rows) {
    for (const auto& [a, sa] : g) {
      for (const auto& [b, sb] : g) v += sa * sb * X(a, b).real();
    }
  }
  return v;
}

Eigen::MatrixXd DistanceFactor::dense(int dim) const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& g : rows) {
    for (const auto& [a, sa] : g) {
      for (const auto& [b, sb] : g) A(a, b) += sa * sb;
    }
  }
  return A;
}

DistanceFactor build_distance_factor(std::uint64_t k, std::uint64_t l, const SystemDims& dims) {
  if (k == l) throw DegenerateInputError("distance matrix needs k != l");
  const auto a = index_to_symbols(k, dims);
  const auto b = index_to_symbols(l, dims);
  DistanceFactor f;
  for (int r = 1; r <= dims.resources(); ++r) {
    std::vector<std::pair<int, int>> g;
    for (const auto& slot : dims.users_on(r)) {
      const int mk = a.symbols[slot.user - 1];
      const int ml = b.symbols[slot.user - 1];
      if (mk == ml) continue;
      g.emplace_back(vec_index(dims, slot.user, mk, slot.row + 1), 1);
      g.emplace_back(vec_index(dims, slot.user, ml, slot.row + 1), -1);
    }
    if (!g.empty()) {
      std::sort(g.begin(), g.end());
      f.rows.push_back(std::move(g));
    }
  }
  return f;
}

SparseSymmetricMatrix build_distance_matrix(std::uint64_t k, std::uint64_t l,
                                            const SystemDims& dims) {
  const auto f = build_distance_factor(k, l, dims);
  // Rows touch disjoint index sets, so every product lands on its own coordinate.
  std::vector<Triplet> t;
  for (const auto& g : f.rows) {
    for (const auto& [a, sa] : g) {
      for (const auto& [b, sb] : g) {
        if (a <= b) t.push_back({a, b, static_cast<double>(sa * sb)});
      }
    }
  }
  return SparseSymmetricMatrix(dims.vector_length(), std::move(t));
}

std::uint64_t constraint_count(const SystemDims& dims) {
  const std::uint64_t n = dims.multiplexed_count();
  if (n == 0) throw CapacityError("M^J exceeds 2^62");
  const unsigned __int128 c = static_cast<unsigned __int128>(n) * (n - 1) / 2;
  if (c > std::numeric_limits<std::uint64_t>::max()) {
    throw CapacityError("pair count exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t pair_index(std::uint64_t k, std::uint64_t l) {
  if (k == l) throw DegenerateInputError("pair index needs k != l");
  if (k > l) std::swap(k, l);
  if (k < 1) throw RangeError("pair index needs one-based k, l");
  const std::uint64_t l0 = l - 1;
  return l0 * (l0 - 1) / 2 + (k - 1) + 1;
}

std::pair<std::uint64_t, std::uint64_t> pair_from_index(std::uint64_t i) {
  if (i < 1) throw RangeError("pair index must be positive");
  const std::uint64_t i0 = i - 1;
  // Largest l0 with l0 (l0 - 1) / 2 <= i0.
  auto l0 = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(i0))) / 2.0);
  while (l0 * (l0 - 1) / 2 > i0) --l0;
  while ((l0 + 1) * l0 / 2 <= i0) ++l0;
  const std::uint64_t k0 = i0 - l0 * (l0 - 1) / 2;
  return {k0 + 1, l0 + 1};
}

QcqpInstance::QcqpInstance(SystemDims dims, double power_budget)
    : dims_(std::move(dims)), power_budget_(power_budget) {
  if (!(power_budget > 0.0) || !std::isfinite(power_budget)) {
    throw ParameterError("power budget must be positive and finite");
  }
  pair_count_ = constraint_count(dims_);
  for (int j = 1; j <= dims_.users(); ++j) power_.push_back(build_power_matrix(j, dims_));
}

SparseSymmetricMatrix QcqpInstance::distance_matrix(std::uint64_t i) const {
  if (i < 1 || i > pair_count_) throw RangeError("pair index out of range");
  const auto [k, l] = pair_from_index(i);
  return build_distance_matrix(k, l, dims_);
}

DistanceFactor QcqpInstance::distance_factor(std::uint64_t i) const {
  if (i < 1 || i > pair_count_) throw RangeError("pair index out of range");
  const auto [k, l] = pair_from_index(i);
  return build_distance_factor(k, l, dims_);
}

PairTraceTable::PairTraceTable(const SystemDims& dims, const CMatrix& X) : dims_(dims) {
  if (X.rows() != dims.vector_length() || X.cols() != dims.vector_length()) {
    throw ParameterError("matrix dimension does not match N*M*J");
  }
  if (dims.multiplexed_count() == 0 || dims.multiplexed_count() > (std::uint64_t{1} << 24)) {
    throw CapacityError("pair scan needs M^J <= 2^24");
  }
  const auto M = static_cast<std::uint64_t>(dims.codebook_size());
  for (int r = 1; r <= dims.resources(); ++r) {
    const auto& slots = dims.users_on(r);
    Resource res;
    res.local_count = 1;
    for (const auto& s : slots) {
      res.users.push_back(s.user - 1);
      res.local_count *= M;
    }
    if (res.local_count > 4096) throw CapacityError("resource degree too large for pair tables");
    res.table.assign(res.local_count * res.local_count, 0.0);
    std::vector<int> idx;
    std::vector<int> sign;
    for (std::uint64_t ck = 0; ck < res.local_count; ++ck) {
      for (std::uint64_t cl = 0; cl < res.local_count; ++cl) {
        idx.clear();
        sign.clear();
        std::uint64_t a = ck;
        std::uint64_t b = cl;
        for (const auto& s : slots) {
          const int mk = static_cast<int>(a % M) + 1;
          const int ml = static_cast<int>(b % M) + 1;
          a /= M;
          b /= M;
          if (mk == ml) continue;
          idx.push_back(vec_index(dims, s.user, mk, s.row + 1));
          sign.push_back(1);
          idx.push_back(vec_index(dims, s.user, ml, s.row + 1));
          sign.push_back(-1);
        }
        double v = 0.0;
        for (std::size_t p = 0; p < idx.size(); ++p) {
          for (std::size_t q = 0; q < idx.size(); ++q) {
            v += sign[p] * sign[q] * X(idx[p], idx[q]).real();
          }
        }
        res.table[ck * res.local_count + cl] = v;
      }
    }
    resources_.push_back(std::move(res));
  }
}

std::uint64_t PairTraceTable::local_code(const Resource& res, std::uint64_t k0) const {
  const auto M = static_cast<std::uint64_t>(dims_.codebook_size());
  std::uint64_t code = 0;
  std::uint64_t place = 1;
  // users are listed in increasing order, so one pass over the digits suffices
  std::size_t next = 0;
  for (int j = 0; j < dims_.users() && next < res.users.size(); ++j) {
    const std::uint64_t digit = k0 % M;
    k0 /= M;
    if (res.users[next] == j) {
      code += digit * place;
      place *= M;
      ++next;
    }
  }
  return code;
}

double PairTraceTable::operator()(std::uint64_t k, std::uint64_t l) const {
  const auto count = dims_.multiplexed_count();
  if (k < 1 || l < 1 || k > count || l > count) throw RangeError("multiplexed index out of range");
  double v = 0.0;
  for (const auto& res : resources_) {
    v += res.table[local_code(res, k - 1) * res.local_count + local_code(res, l - 1)];
  }
  return v;
}

}  // namespace scma
