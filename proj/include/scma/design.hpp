#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scma/core.hpp"
#include "scma/med.hpp"
#include "scma/sdp.hpp"

namespace scma {

// Penalty weights per alternating-maximization iteration (phi is one-based). Lists
// shorter than max_iterations repeat their final value.
struct WeightSchedule {
  std::vector<double> first;   // w_{1,phi}
  std::vector<double> second;  // w_{2,phi}
  int max_iterations = 50;

  double weight_first(int phi) const;
  double weight_second(int phi) const;
  void validate() const;

  static WeightSchedule constant(double weight, int max_iterations);
  // "j3-default" (w = 0.1, 50 iterations) or "paper-j6" (piecewise, 72 iterations).
  static WeightSchedule preset(const std::string& name);
  // {"max_iterations": 50, "w1": [...], "w2": [...]} or {"max_iterations": 50, "w": 0.1}
  static WeightSchedule from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct DesignIteration {
  int phi = 0;
  double w1 = 0.0;
  double w2 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  // Objective t1 + t2 + w tr(X1 X2) after the X1 update and after the X2 update.
  double objective_after_first = 0.0;
  double objective_after_second = 0.0;
  double penalty_residual = 0.0;  // |tr X1 tr X2 - tr(X1 X2)|
  double sigma_ratio = 0.0;       // sigma_2 / sigma_1 of X2
  double relative_difference = 0.0;  // ||X1 - X2||_F / ||X2||_F
  std::size_t active_pairs = 0;
  double elapsed_seconds = 0.0;
};

struct DesignTrace {
  std::vector<DesignIteration> iterations;
  std::string status;  // "converged", "max-iterations", "rank-failure"
  std::optional<std::uint64_t> seed;
  double initial_med = 0.0;
};

struct RankOne {
  CVector x;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

class RankExtractionError : public std::runtime_error {
 public:
  RankExtractionError(const std::string& what, double ratio)
      : std::runtime_error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

// Leading eigenpair of a Hermitian PSD matrix, x = sqrt(sigma1) u1 with the
// largest-magnitude entry made real positive. Refused when sigma2/sigma1 > max_ratio.
RankOne extract_rank_one(const CMatrix& X, double max_ratio = 1e-4);

struct DesignOptions {
  double penalty_tol = 1e-3;
  double rank_ratio = 1e-4;
  bool check_weak_duality = true;
};

struct DesignResult {
  CodebookCollection collection;
  DistanceSummary med;
  DesignTrace trace;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::optional<double> dual_bound;  // sqrt of the dual objective, distance units
};

class DesignConvergenceError : public std::runtime_error {
 public:
  DesignConvergenceError(const std::string& what, DesignTrace trace,
                         std::optional<CodebookCollection> best)
      : std::runtime_error(what), trace_(std::move(trace)), best_(std::move(best)) {}
  const DesignTrace& trace() const noexcept { return trace_; }
  // Best rank-one-extractable iterate seen during the run, if any.
  const std::optional<CodebookCollection>& best() const noexcept { return best_; }

 private:
  DesignTrace trace_;
  std::optional<CodebookCollection> best_;
};

// Entries i.i.d. uniform on [0, 1] (real), then every user scaled to power `budget`.
// A nonzero `imaginary_jitter` adds i.i.d. N(0, jitter^2) imaginary parts: with purely
// real data every SDP iterate stays real, which confines the search to real codebooks.
CodebookCollection random_initial_collection(const SystemDims& dims, double budget,
                                             std::uint64_t seed, double imaginary_jitter = 0.0);

// Alternating maximization with exact penalty. `init` must have every user's
// power equal to the instance budget.
DesignResult run_algorithm1(const CodebookCollection& init, const WeightSchedule& schedule,
                            const QcqpInstance& instance, const SolverConfig& config,
                            const DesignOptions& options = {});

struct MedUpperBound {
  double bound = 0.0;  // distance units
  DualCertificate certificate;
  std::size_t support_size = 0;
};

MedUpperBound compute_med_upper_bound(const SystemDims& dims, double budget,
                                      const SolverConfig& config);

}  // namespace scma
