#include "scma/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "scma/errors.hpp"

namespace scma {
namespace {

void check_user(const SystemDims& dims, int user) {
  if (user < 1 || user > dims.users()) {
    throw RangeError("user index " + std::to_string(user) + " outside 1.." +
                     std::to_string(dims.users()));
  }
}

void check_symbol(const SystemDims& dims, int symbol) {
  if (symbol < 1 || symbol > dims.codebook_size()) {
    throw RangeError("symbol " + std::to_string(symbol) + " outside 1.." +
                     std::to_string(dims.codebook_size()));
  }
}

}  // namespace

SystemDims::SystemDims(int resources, int nonzeros, int codebook_size, int users,
                       std::vector<std::vector<int>> mapping)
    : resources_(resources),
      nonzeros_(nonzeros),
      codebook_size_(codebook_size),
      users_(users),
      mapping_(std::move(mapping)) {
  if (codebook_size < 2 || !std::has_single_bit(static_cast<unsigned>(codebook_size))) {
    throw ParameterError("M must be a power of two >= 2, got " + std::to_string(codebook_size));
  }
  if (nonzeros < 1 || nonzeros >= resources) {
    throw ParameterError("need 1 <= N < K, got N=" + std::to_string(nonzeros) +
                         " K=" + std::to_string(resources));
  }
  if (users < 1) throw ParameterError("J must be positive");
  // J <= C(K, N)
  double combos = 1.0;
  for (int i = 0; i < nonzeros; ++i) combos = combos * (resources - i) / (i + 1);
  if (users > combos + 0.5) {
    throw ParameterError("J=" + std::to_string(users) + " exceeds C(K,N)");
  }
  if (static_cast<int>(mapping_.size()) != users) {
    throw ParameterError("mapping must list one support per user");
  }
  std::set<std::vector<int>> seen;
  for (int j = 0; j < users; ++j) {
    auto rows = mapping_[j];
    if (static_cast<int>(rows.size()) != nonzeros) {
      throw ParameterError("mapping of user " + std::to_string(j + 1) + " must select N rows");
    }
    for (int r : rows) {
      if (r < 1 || r > resources) {
        throw ParameterError("mapping row " + std::to_string(r) + " outside 1..K");
      }
    }
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ParameterError("mapping of user " + std::to_string(j + 1) + " repeats a row");
    }
    if (!std::is_sorted(rows.begin(), rows.end())) {
      // V_j is I_K with columns removed, so its selected rows keep their order.
      throw ParameterError("mapping rows of user " + std::to_string(j + 1) +
                           " must be increasing");
    }
    if (!seen.insert(sorted).second) {
      throw ParameterError("mapping matrices must be pairwise distinct");
    }
  }

  bits_per_symbol_ = std::countr_zero(static_cast<unsigned>(codebook_size));
  const double total_bits = static_cast<double>(bits_per_symbol_) * users;
  if (total_bits > 62) {
    multiplexed_count_ = 0;  // beyond enumeration; accessors that need it throw
  } else {
    multiplexed_count_ = std::uint64_t{1} << static_cast<int>(total_bits);
  }

  users_on_.assign(resources, {});
  for (int j = 0; j < users; ++j) {
    for (int n = 0; n < nonzeros; ++n) {
      users_on_[mapping_[j][n] - 1].push_back({j + 1, n});
    }
  }
}

SystemDims SystemDims::standard(int users) {
  static const std::vector<std::vector<int>> kSix = {{1, 2}, {3, 4}, {1, 3},
                                                     {2, 4}, {1, 4}, {2, 3}};
  if (users < 1 || users > 6) throw ParameterError("standard layout supports 1..6 users");
  return SystemDims(4, 2, 4, users, {kSix.begin(), kSix.begin() + users});
}

const std::vector<int>& SystemDims::support(int user) const {
  if (user < 1 || user > users_) throw RangeError("user index out of range");
  return mapping_[user - 1];
}

const std::vector<UserSlot>& SystemDims::users_on(int resource) const {
  if (resource < 1 || resource > resources_) throw RangeError("resource index out of range");
  return users_on_[resource - 1];
}

bool SystemDims::operator==(const SystemDims& other) const {
  return resources_ == other.resources_ && nonzeros_ == other.nonzeros_ &&
         codebook_size_ == other.codebook_size_ && users_ == other.users_ &&
         mapping_ == other.mapping_;
}

CodebookCollection::CodebookCollection(SystemDims dims, std::vector<CMatrix> constellations)
    : dims_(std::move(dims)), constellations_(std::move(constellations)) {
  if (static_cast<int>(constellations_.size()) != dims_.users()) {
    throw ParameterError("expected " + std::to_string(dims_.users()) + " constellation matrices");
  }
  for (int j = 0; j < dims_.users(); ++j) {
    const auto& c = constellations_[j];
    if (c.rows() != dims_.nonzeros() || c.cols() != dims_.codebook_size()) {
      throw ParameterError("constellation of user " + std::to_string(j + 1) + " must be N x M");
    }
    if (!c.allFinite()) {
      throw ParameterError("constellation of user " + std::to_string(j + 1) +
                           " has non-finite entries");
    }
  }
}

CodebookCollection CodebookCollection::zeros(const SystemDims& dims) {
  std::vector<CMatrix> c(dims.users(), CMatrix::Zero(dims.nonzeros(), dims.codebook_size()));
  return CodebookCollection(dims, std::move(c));
}

const CMatrix& CodebookCollection::constellation(int user) const {
  check_user(dims_, user);
  return constellations_[user - 1];
}

double CodebookCollection::user_power(int user) const {
  return constellation(user).squaredNorm() / dims_.codebook_size();
}

double CodebookCollection::max_user_power() const {
  double p = 0.0;
  for (int j = 1; j <= dims_.users(); ++j) p = std::max(p, user_power(j));
  return p;
}

bool CodebookCollection::is_power_normalized(double budget, double rel_tol) const {
  return std::abs(max_user_power() - budget) <= rel_tol * std::abs(budget);
}

CodebookCollection CodebookCollection::scaled(cplx factor) const {
  auto c = constellations_;
  for (auto& m : c) m *= factor;
  return CodebookCollection(dims_, std::move(c));
}

MultiplexedSymbol index_to_symbols(std::uint64_t index, const SystemDims& dims) {
  const std::uint64_t count = dims.multiplexed_count();
  if (count == 0) throw CapacityError("M^J exceeds 2^62");
  if (index < 1 || index > count) {
    throw RangeError("multiplexed index " + std::to_string(index) + " outside 1.." +
                     std::to_string(count));
  }
  MultiplexedSymbol out{index, std::vector<int>(dims.users())};
  std::uint64_t rest = index - 1;
  const auto m = static_cast<std::uint64_t>(dims.codebook_size());
  for (int j = 0; j < dims.users(); ++j) {
    out.symbols[j] = static_cast<int>(rest % m) + 1;
    rest /= m;
  }
  return out;
}

std::uint64_t symbols_to_index(std::span<const int> symbols, const SystemDims& dims) {
  if (static_cast<int>(symbols.size()) != dims.users()) {
    throw ParameterError("symbol vector must have one entry per user");
  }
  std::uint64_t index = 0;
  std::uint64_t place = 1;
  for (int j = 0; j < dims.users(); ++j) {
    check_symbol(dims, symbols[j]);
    index += static_cast<std::uint64_t>(symbols[j] - 1) * place;
    place *= static_cast<std::uint64_t>(dims.codebook_size());
  }
  return index + 1;
}

int bits_to_symbol(std::span<const int> bits) {
  int m = 1;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw ParameterError("bits must be 0 or 1");
    m += bits[i] << i;
  }
  return m;
}

std::vector<int> symbol_to_bits(int symbol, int bits_per_symbol) {
  if (symbol < 1 || symbol > (1 << bits_per_symbol)) throw RangeError("symbol out of range");
  std::vector<int> bits(bits_per_symbol);
  for (int i = 0; i < bits_per_symbol; ++i) bits[i] = ((symbol - 1) >> i) & 1;
  return bits;
}

int bit_hamming(int symbol_a, int symbol_b) {
  return std::popcount(static_cast<unsigned>((symbol_a - 1) ^ (symbol_b - 1)));
}

CVector encode(const CodebookCollection& collection, int user, int symbol) {
  const auto& dims = collection.dims();
  check_user(dims, user);
  check_symbol(dims, symbol);
  CVector out = CVector::Zero(dims.resources());
  const auto& rows = dims.support(user);
  const auto& c = collection.constellation(user);
  for (int n = 0; n < dims.nonzeros(); ++n) out(rows[n] - 1) = c(n, symbol - 1);
  return out;
}

CVector superimpose(const CodebookCollection& collection, std::span<const int> symbols) {
  const auto& dims = collection.dims();
  if (static_cast<int>(symbols.size()) != dims.users()) {
    throw ParameterError("symbol vector must have one entry per user");
  }
  CVector out = CVector::Zero(dims.resources());
  for (int j = 1; j <= dims.users(); ++j) {
    const int m = symbols[j - 1];
    check_symbol(dims, m);
    const auto& rows = dims.support(j);
    const auto& c = collection.constellation(j);
    for (int n = 0; n < dims.nonzeros(); ++n) out(rows[n] - 1) += c(n, m - 1);
  }
  return out;
}

CVector superimpose(const CodebookCollection& collection, const MultiplexedSymbol& symbol) {
  return superimpose(collection, std::span<const int>(symbol.symbols));
}

CMatrix superimposed_codewords(const CodebookCollection& collection) {
  const auto& dims = collection.dims();
  const std::uint64_t count = dims.multiplexed_count();
  if (count == 0 || count > (std::uint64_t{1} << 24)) {
    throw CapacityError("M^J too large to tabulate superimposed codewords");
  }
  const auto total = static_cast<Eigen::Index>(count);
  CMatrix table = CMatrix::Zero(dims.resources(), total);
  // User j's symbol cycles with period M^j in the flat index.
  Eigen::Index stride = 1;
  for (int j = 1; j <= dims.users(); ++j) {
    const auto& rows = dims.support(j);
    const auto& c = collection.constellation(j);
    for (Eigen::Index k = 0; k < total; ++k) {
      const auto m = static_cast<int>((k / stride) % dims.codebook_size());
      for (int n = 0; n < dims.nonzeros(); ++n) table(rows[n] - 1, k) += c(n, m);
    }
    stride *= dims.codebook_size();
  }
  return table;
}

double average_symbol_energy(const CodebookCollection& collection) {
  const auto& dims = collection.dims();
  double sum = 0.0;
  for (const auto& c : collection.constellations()) sum += c.squaredNorm();
  return sum / (static_cast<double>(dims.users()) * dims.codebook_size());
}

double average_bit_energy(const CodebookCollection& collection) {
  return average_symbol_energy(collection) / collection.dims().bits_per_symbol();
}

CodebookCollection normalize_power(const CodebookCollection& collection, double budget) {
  if (!(budget > 0.0)) throw ParameterError("power budget must be positive");
  const double peak = collection.max_user_power();
  if (peak <= 0.0) throw DegenerateInputError("cannot normalize an all-zero collection");
  if (peak == budget) return collection;
  return collection.scaled(std::sqrt(budget / peak));
}

CodebookCollection normalize_each_user(const CodebookCollection& collection, double budget) {
  if (!(budget > 0.0)) throw ParameterError("power budget must be positive");
  auto c = collection.constellations();
  for (int j = 1; j <= collection.dims().users(); ++j) {
    const double p = collection.user_power(j);
    if (p <= 0.0) {
      throw DegenerateInputError("user " + std::to_string(j) + " has zero power");
    }
    c[j - 1] *= std::sqrt(budget / p);
  }
  return CodebookCollection(collection.dims(), std::move(c));
}

}  // namespace scma
