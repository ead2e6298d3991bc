#include "scma/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "scma/errors.hpp"
#include "scma/linalg.hpp"

namespace scma {
namespace {

// A_{k,l} is fixed by its set of factor rows up to sign, so this identifies
// pairs that share the same constraint matrix.
std::vector<int> canonical_key(const DistanceFactor& f) {
  std::vector<std::vector<int>> rows;
  for (const auto& g : f.rows) {
    std::vector<int> r;
    const int flip = g.front().second;
    for (const auto& [idx, sign] : g) r.push_back((idx + 1) * sign * flip);
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());
  std::vector<int> key;
  for (const auto& r : rows) {
    key.push_back(static_cast<int>(r.size()));
    key.insert(key.end(), r.begin(), r.end());
  }
  return key;
}

class ActiveSet {
 public:
  explicit ActiveSet(const QcqpInstance& instance) : instance_(instance) {}

  bool add(std::uint64_t i) {
    auto f = instance_.distance_factor(i);
    if (!keys_.insert(canonical_key(f)).second) return false;
    pairs_.push_back(i);
    factors_.push_back(std::move(f));
    return true;
  }

  const std::vector<std::uint64_t>& pairs() const { return pairs_; }
  const std::vector<DistanceFactor>& factors() const { return factors_; }

 private:
  const QcqpInstance& instance_;
  std::set<std::vector<int>> keys_;
  std::vector<std::uint64_t> pairs_;
  std::vector<DistanceFactor> factors_;
};

detail::RestrictedResult run_backend(const detail::RestrictedProblem& problem,
                                     const SolverConfig& config) {
  SolverBackend backend = config.backend;
  if (backend == SolverBackend::automatic) {
    backend = problem.dim <= config.interior_point_max_dim ? SolverBackend::interior_point
                                                           : SolverBackend::operator_splitting;
  }
  return backend == SolverBackend::interior_point ? detail::solve_restricted_ipm(problem, config)
                                                  : detail::solve_restricted_admm(problem, config);
}

SdpSolution cutting_plane(const QcqpInstance& instance, const CMatrix& objective,
                          const SolverConfig& config, const std::vector<std::uint64_t>& warm) {
  config.validate();
  const auto& dims = instance.dims();
  ActiveSet active(instance);
  for (auto i : warm) active.add(i);
  if (config.full_enumeration) {
    for (std::uint64_t i = 1; i <= instance.pair_count(); ++i) active.add(i);
  } else {
    for (auto i : single_user_pairs(dims)) active.add(i);
  }

  detail::RestrictedProblem problem;
  problem.dim = instance.dim();
  problem.users = dims.users();
  problem.block = dims.nonzeros() * dims.codebook_size();
  problem.power_target = instance.power_target();
  problem.objective = objective;

  SdpSolution sol;
  for (int round = 1; round <= config.max_rounds; ++round) {
    problem.pairs = active.factors();
    auto res = run_backend(problem, config);
    sol.X = std::move(res.X);
    sol.t = res.t;
    sol.status = res.status;
    sol.kkt = res.kkt;
    sol.iterations += res.iterations;
    sol.rounds = round;
    sol.active_pairs = active.pairs();
    sol.pair_multipliers.assign(res.lambda.data(), res.lambda.data() + res.lambda.size());
    sol.power_multipliers = res.mu;

    // Full scan: keep the `batch_size` most violated pairs, ties by pair index.
    const PairTraceTable table(dims, sol.X);
    const double threshold = sol.t - config.violation_tol * std::max(1.0, std::abs(sol.t));
    using Entry = std::pair<double, std::uint64_t>;
    std::priority_queue<Entry> worst;  // max-heap: top is the least violated kept entry
    double scan_min = std::numeric_limits<double>::infinity();
    table.for_each_pair([&](std::uint64_t k, std::uint64_t l, double v) {
      scan_min = std::min(scan_min, v);
      if (v >= threshold) return;
      const Entry e{v, pair_index(k, l)};
      if (worst.size() < config.batch_size) {
        worst.push(e);
      } else if (e < worst.top()) {
        worst.pop();
        worst.push(e);
      }
    });
    sol.full_scan_min = scan_min;

    std::vector<Entry> violators;
    while (!worst.empty()) {
      violators.push_back(worst.top());
      worst.pop();
    }
    std::sort(violators.begin(), violators.end());
    std::size_t added = 0;
    for (const auto& [v, i] : violators) added += active.add(i) ? 1 : 0;

    if (config.trace) {
      config.trace({"round", round, sol.t, sol.kkt.primal, sol.kkt.dual, sol.kkt.gap,
                    active.pairs().size()});
    }
    if (violators.empty()) return sol;
    if (added == 0) {
      // Violated pairs duplicate active constraints: the restricted solve is inaccurate.
      sol.status = SolveStatus::max_iter;
      return sol;
    }
  }
  sol.status = SolveStatus::max_iter;
  return sol;
}

}  // namespace

std::string to_string(SolverBackend backend) {
  switch (backend) {
    case SolverBackend::automatic: return "auto";
    case SolverBackend::interior_point: return "ipm";
    case SolverBackend::operator_splitting: return "admm";
  }
  return "?";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "?";
}

SolverBackend parse_backend(const std::string& name) {
  if (name == "auto") return SolverBackend::automatic;
  if (name == "ipm") return SolverBackend::interior_point;
  if (name == "admm") return SolverBackend::operator_splitting;
  throw ParameterError("unknown solver backend '" + name + "' (auto, ipm, admm)");
}

void SolverConfig::validate() const {
  if (!(feasibility_tol > 0.0) || !(gap_tol > 0.0) || !(violation_tol > 0.0)) {
    throw ParameterError("solver tolerances must be positive");
  }
  if (batch_size < 1) throw ParameterError("batch size must be at least 1");
  if (max_iterations < 1 || admm_max_iterations < 1 || max_rounds < 1) {
    throw ParameterError("iteration limits must be positive");
  }
}

std::vector<std::uint64_t> single_user_pairs(const SystemDims& dims) {
  std::vector<std::uint64_t> out;
  std::vector<int> a(dims.users(), 1);
  std::vector<int> b(dims.users(), 1);
  for (int j = 0; j < dims.users(); ++j) {
    for (int p = 1; p <= dims.codebook_size(); ++p) {
      for (int q = p + 1; q <= dims.codebook_size(); ++q) {
        a[j] = p;
        b[j] = q;
        out.push_back(pair_index(symbols_to_index(a, dims), symbols_to_index(b, dims)));
      }
    }
    a[j] = 1;
    b[j] = 1;
  }
  return out;
}

SdpSolution solve_maxmin(const QcqpInstance& instance, const SolverConfig& config,
                         const std::vector<std::uint64_t>& warm_active) {
  auto sol = cutting_plane(instance, CMatrix(), config, warm_active);
  sol.objective = sol.t;
  return sol;
}

SdpSolution solve_penalized(const QcqpInstance& instance, const CMatrix& fixed_X, double fixed_t,
                            double weight, const SolverConfig& config,
                            const std::vector<std::uint64_t>& warm_active) {
  if (!(weight > 0.0)) throw ParameterError("penalty weight must be positive");
  if (fixed_X.rows() != instance.dim() || fixed_X.cols() != instance.dim()) {
    throw ParameterError("fixed matrix dimension does not match N*M*J");
  }
  const CMatrix C = weight * hermitian_part(fixed_X);
  auto sol = cutting_plane(instance, C, config, warm_active);
  sol.objective = sol.t + weight * (sol.X.array() * fixed_X.transpose().array()).real().sum() +
                  fixed_t;
  return sol;
}

DualCertificate certificate_from_solution(const QcqpInstance& instance,
                                          const SdpSolution& solution) {
  const auto& dims = instance.dims();
  const int n = instance.dim();
  const int block = dims.nonzeros() * dims.codebook_size();
  DualCertificate cert;
  cert.status = solution.status;

  double total = 0.0;
  for (std::size_t i = 0; i < solution.active_pairs.size(); ++i) {
    const double l = std::max(0.0, solution.pair_multipliers[i]);
    if (l > 0.0) {
      cert.pairs.push_back(solution.active_pairs[i]);
      cert.lambda.push_back(l);
      total += l;
    }
  }
  if (!(total > 0.0)) throw SolverError("dual multipliers vanished");
  for (auto& l : cert.lambda) l /= total;

  CMatrix S = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < cert.pairs.size(); ++i) {
    S += cert.lambda[i] * instance.distance_factor(cert.pairs[i]).dense(n).cast<cplx>();
  }
  cert.mu = solution.power_multipliers;
  CMatrix slack = -S;
  for (int j = 0; j < dims.users(); ++j) {
    slack.diagonal().segment(j * block, block).array() += cert.mu(j);
  }
  const double lo = min_eigenvalue(slack);
  if (lo < 0.0) {
    // Uniform shift of mu restores dual feasibility.
    const double shift = -lo * (1.0 + 1e-12) + 1e-15;
    cert.mu.array() += shift;
    slack.diagonal().array() += shift;
  }
  cert.min_slack_eigenvalue = min_eigenvalue(slack);
  cert.lambda_sum = 0.0;
  for (double l : cert.lambda) cert.lambda_sum += l;
  cert.bound = instance.power_target() * cert.mu.sum();
  return cert;
}

DualCertificate solve_dual(const QcqpInstance& instance, const SolverConfig& config) {
  return certificate_from_solution(instance, solve_maxmin(instance, config));
}

CertificateCheck verify_certificate(const QcqpInstance& instance, const DualCertificate& cert,
                                    double eig_floor, double sum_tol) {
  const auto& dims = instance.dims();
  const int n = instance.dim();
  const int block = dims.nonzeros() * dims.codebook_size();
  if (cert.pairs.size() != cert.lambda.size()) throw ParameterError("certificate size mismatch");
  if (cert.mu.size() != dims.users()) throw ParameterError("certificate needs one mu per user");

  CertificateCheck check;
  check.min_lambda = cert.lambda.empty() ? 0.0 : *std::min_element(cert.lambda.begin(), cert.lambda.end());
  CMatrix slack = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < cert.pairs.size(); ++i) {
    slack -= cert.lambda[i] * instance.distance_factor(cert.pairs[i]).dense(n).cast<cplx>();
    check.lambda_sum += cert.lambda[i];
  }
  for (int j = 0; j < dims.users(); ++j) {
    slack.diagonal().segment(j * block, block).array() += cert.mu(j);
  }
  check.min_slack_eigenvalue = min_eigenvalue(slack);
  check.bound = instance.power_target() * cert.mu.sum();
  check.valid = check.min_lambda >= 0.0 && std::abs(check.lambda_sum - 1.0) <= sum_tol &&
                check.min_slack_eigenvalue >= eig_floor;
  return check;
}

}  // namespace scma
