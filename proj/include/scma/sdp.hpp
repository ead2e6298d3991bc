#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scma/qcqp.hpp"

namespace scma {

enum class SolverBackend { automatic, interior_point, operator_splitting };
enum class SolveStatus { optimal, max_iter, infeasible };

std::string to_string(SolverBackend backend);
std::string to_string(SolveStatus status);
SolverBackend parse_backend(const std::string& name);

struct SolverEvent {
  std::string stage;  // "ipm", "admm", "round"
  int iteration = 0;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  std::size_t active_size = 0;
};

struct SolverConfig {
  SolverBackend backend = SolverBackend::automatic;
  // automatic picks the interior-point backend up to this vector length
  int interior_point_max_dim = 64;
  int max_iterations = 100;          // interior-point iterations per restricted solve
  int admm_max_iterations = 50000;   // operator-splitting iterations per restricted solve
  double feasibility_tol = 1e-7;
  double gap_tol = 1e-6;
  double psd_floor = -1e-7;
  std::size_t batch_size = 256;
  int max_rounds = 200;              // constraint-generation rounds
  double violation_tol = 1e-6;       // relative to max(1, |t|)
  // Skip generation and keep every distinct pair active (small instances only).
  bool full_enumeration = false;
  std::uint64_t seed = 0;
  std::function<void(const SolverEvent&)> trace;

  void validate() const;
};

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct SdpSolution {
  CMatrix X;
  double t = 0.0;
  // t + w tr(X fixed_X) + fixed_t for penalized solves, t otherwise.
  double objective = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  KktResiduals kkt;
  // Active pairs (one-based pair indices) with their multipliers.
  std::vector<std::uint64_t> active_pairs;
  std::vector<double> pair_multipliers;
  Eigen::VectorXd power_multipliers;
  // Minimum of tr(A_i X) over every pair, from the final full scan.
  double full_scan_min = 0.0;
  int iterations = 0;
  int rounds = 0;
};

struct DualCertificate {
  std::vector<std::uint64_t> pairs;   // support of lambda
  std::vector<double> lambda;
  Eigen::VectorXd mu;
  double bound = 0.0;                 // sum_j mu_j M P, squared-distance units
  double min_slack_eigenvalue = 0.0;  // of sum mu_j B_j - sum lambda_i A_i
  double lambda_sum = 0.0;
  SolveStatus status = SolveStatus::max_iter;
};

// Canonical pairs of the initial active set: every pair differing in a single user,
// with all other users at symbol 1.
std::vector<std::uint64_t> single_user_pairs(const SystemDims& dims);

// max t s.t. tr(A_i X) >= t for all pairs, tr(B_j X) = M P, X PSD.
SdpSolution solve_maxmin(const QcqpInstance& instance, const SolverConfig& config,
                         const std::vector<std::uint64_t>& warm_active = {});

// max t + w tr(X fixed_X) under the same constraints; objective includes fixed_t.
SdpSolution solve_penalized(const QcqpInstance& instance, const CMatrix& fixed_X, double fixed_t,
                            double weight, const SolverConfig& config,
                            const std::vector<std::uint64_t>& warm_active = {});

DualCertificate solve_dual(const QcqpInstance& instance, const SolverConfig& config);

// Dual-feasible certificate built from the multipliers of a max-min solution.
DualCertificate certificate_from_solution(const QcqpInstance& instance,
                                          const SdpSolution& solution);

struct CertificateCheck {
  bool valid = false;
  double min_slack_eigenvalue = 0.0;
  double lambda_sum = 0.0;
  double min_lambda = 0.0;
  double bound = 0.0;
};

CertificateCheck verify_certificate(const QcqpInstance& instance, const DualCertificate& cert,
                                    double eig_floor = -1e-7, double sum_tol = 1e-9);

namespace detail {

// The max-min SDP restricted to an explicit list of distance constraints.
struct RestrictedProblem {
  int dim = 0;
  int users = 0;
  int block = 0;  // N M: user j owns rows [j block, (j + 1) block)
  double power_target = 0.0;
  std::vector<DistanceFactor> pairs;
  CMatrix objective;  // linear term C, may be empty
};

struct RestrictedResult {
  CMatrix X;
  double t = 0.0;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  SolveStatus status = SolveStatus::max_iter;
  KktResiduals kkt;
  int iterations = 0;
};

RestrictedResult solve_restricted_ipm(const RestrictedProblem& problem, const SolverConfig& config);
RestrictedResult solve_restricted_admm(const RestrictedProblem& problem,
                                       const SolverConfig& config);

}  // namespace detail

}  // namespace scma
