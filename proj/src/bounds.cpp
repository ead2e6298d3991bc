#include "scma/bounds.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "scma/errors.hpp"
#include "scma/med.hpp"

namespace scma {
namespace {

// Below this log value a direct sum of Q terms would lose the smallest ones to underflow.
constexpr double kLinearFloor = -700.0;

void check_noise(double noise_var) {
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw ParameterError("noise variance must be positive and finite");
  }
}

int user_hamming(std::uint64_t diff, int bits) {
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  int n = 0;
  for (; diff != 0; diff >>= bits) n += (diff & mask) != 0 ? 1 : 0;
  return n;
}

// Accumulates w * Q(x) either directly or as exp(log Q(x) - ref).
class TailSum {
 public:
  explicit TailSum(double ref_log) : ref_(ref_log), linear_(ref_log > kLinearFloor) {}

  void add(double x, double w) {
    if (w == 0.0) return;
    sum_ += w * (linear_ ? q_function(x) : std::exp(log_q_function(x) - ref_));
  }
  double log_value() const {
    if (sum_ <= 0.0) return -std::numeric_limits<double>::infinity();
    return linear_ ? std::log(sum_) : ref_ + std::log(sum_);
  }

 private:
  double ref_;
  bool linear_;
  double sum_ = 0.0;
};

UnionBound finish(double log_ser_sum, double log_ber_sum, const SystemDims& dims) {
  const double count = static_cast<double>(dims.multiplexed_count());
  UnionBound b;
  b.log_ser = log_ser_sum + std::log(2.0) - std::log(count * dims.users());
  b.log_ber = log_ber_sum + std::log(2.0) - std::log(count * dims.users() * dims.bits_per_symbol());
  b.ser = std::exp(b.log_ser);
  b.ber = std::exp(b.log_ber);
  return b;
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double erfcx(double z) {
  if (z < 0.0) return 2.0 * std::exp(z * z) - erfcx(-z);
  if (z < 25.0) return std::erfc(z) * std::exp(z * z);
  // Asymptotic series 1/(z sqrt(pi)) sum_n (-1)^n (2n-1)!! / (2 z^2)^n.
  const double inv = 1.0 / (2.0 * z * z);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n <= 10; ++n) {
    term *= -(2.0 * n - 1.0) * inv;
    sum += term;
  }
  return sum / (z * std::sqrt(std::numbers::pi));
}

double log_q_function(double x) {
  const double z = x / std::numbers::sqrt2;
  if (z < 25.0) return std::log(0.5 * std::erfc(z));
  return std::log(0.5 * erfcx(z)) - z * z;
}

UnionBound union_bound(const CodebookCollection& collection, double noise_var) {
  check_noise(noise_var);
  const auto& dims = collection.dims();
  const std::uint64_t count = dims.multiplexed_count();
  if (count == 0 || count > kMaxEnumerable) {
    throw CapacityError("union bound enumeration limited to M^J <= " + std::to_string(kMaxEnumerable));
  }
  const CMatrix table = superimposed_codewords(collection);
  const int bits = dims.bits_per_symbol();
  const double scale = 1.0 / std::sqrt(2.0 * noise_var);
  auto dist_sq = [&](std::uint64_t k, std::uint64_t l) {
    return (table.col(static_cast<Eigen::Index>(k)) - table.col(static_cast<Eigen::Index>(l))).squaredNorm();
  };

  double min_sq = std::numeric_limits<double>::infinity();
  for (std::uint64_t l = 1; l < count; ++l) {
    for (std::uint64_t k = 0; k < l; ++k) min_sq = std::min(min_sq, dist_sq(k, l));
  }
  const double ref = log_q_function(std::sqrt(min_sq) * scale);
  TailSum ser(ref);
  TailSum ber(ref);
  for (std::uint64_t l = 1; l < count; ++l) {
    for (std::uint64_t k = 0; k < l; ++k) {
      const double x = std::sqrt(dist_sq(k, l)) * scale;
      const std::uint64_t diff = k ^ l;
      ser.add(x, user_hamming(diff, bits));
      ber.add(x, std::popcount(diff));
    }
  }
  return finish(ser.log_value(), ber.log_value(), dims);
}

UnionBound union_bound_dense(const CodebookCollection& collection, double noise_var) {
  check_noise(noise_var);
  const auto& dims = collection.dims();
  const std::uint64_t count = dims.multiplexed_count();
  if (count == 0 || count > kMaxDenseHamming) {
    throw CapacityError("dense bound limited to M^J <= " + std::to_string(kMaxDenseHamming));
  }
  const auto n = static_cast<Eigen::Index>(count);
  const CMatrix table = superimposed_codewords(collection);
  Eigen::MatrixXd D(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) D(k, l) = (table.col(k) - table.col(l)).squaredNorm();
  }
  const HammingMatrices H(dims);
  double min_sq = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      if (k != l) min_sq = std::min(min_sq, D(k, l));
    }
  }
  const double scale = 1.0 / std::sqrt(2.0 * noise_var);
  const double ref = log_q_function(std::sqrt(min_sq) * scale);
  TailSum ser(ref);
  TailSum ber(ref);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == l) continue;
      const double x = std::sqrt(D(k, l)) * scale;
      ser.add(x, 0.5 * H.symbol(k + 1, l + 1));
      ber.add(x, 0.5 * H.bit(k + 1, l + 1));
    }
  }
  return finish(ser.log_value(), ber.log_value(), dims);
}

double ser_bound(const CodebookCollection& collection, double noise_var) {
  return union_bound(collection, noise_var).ser;
}

double ber_bound(const CodebookCollection& collection, double noise_var) {
  return union_bound(collection, noise_var).ber;
}

ErrorCurve predict_curves(const CodebookCollection& collection, const std::vector<double>& ebn0_db) {
  if (ebn0_db.empty()) throw ParameterError("Eb/N0 grid is empty");
  ErrorCurve curve;
  curve.has_statistics = false;
  curve.metadata = {{"kind", "union-bound"},
                    {"detector", "joint-map"},
                    {"users", std::to_string(collection.dims().users())},
                    {"codebook_size", std::to_string(collection.dims().codebook_size())}};
  for (double e : ebn0_db) {
    ErrorPoint p;
    p.ebn0_db = e;
    p.noise_var = noise_variance(collection, e);
    const auto b = union_bound(collection, p.noise_var);
    p.ser = b.ser;
    p.ber = b.ber;
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace scma
