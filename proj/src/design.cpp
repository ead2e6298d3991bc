#include "scma/design.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "scma/errors.hpp"
#include "scma/linalg.hpp"
#include "scma/qcqp.hpp"

namespace scma {
namespace {

double schedule_at(const std::vector<double>& w, int phi) {
  if (phi < 1) throw RangeError("iteration index is one-based");
  const auto i = static_cast<std::size_t>(phi - 1);
  return i < w.size() ? w[i] : w.back();
}

std::vector<double> piecewise(const std::vector<std::pair<int, double>>& segments) {
  // (last phi of segment, weight)
  std::vector<double> w;
  for (const auto& [last, value] : segments) {
    while (static_cast<int>(w.size()) < last) w.push_back(value);
  }
  return w;
}

// tr(A B) for Hermitian A, B.
double trace_product(const CMatrix& A, const CMatrix& B) {
  return (A.array() * B.transpose().array()).real().sum();
}

}  // namespace

double WeightSchedule::weight_first(int phi) const { return schedule_at(first, phi); }
double WeightSchedule::weight_second(int phi) const { return schedule_at(second, phi); }

void WeightSchedule::validate() const {
  if (max_iterations < 1) throw ParameterError("schedule needs max_iterations >= 1");
  if (first.empty() || second.empty()) throw ParameterError("schedule weights must be non-empty");
  for (double w : first) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("schedule weights must be positive");
  }
  for (double w : second) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("schedule weights must be positive");
  }
}

WeightSchedule WeightSchedule::constant(double weight, int max_iterations) {
  WeightSchedule s{{weight}, {weight}, max_iterations};
  s.validate();
  return s;
}

WeightSchedule WeightSchedule::preset(const std::string& name) {
  if (name == "j3-default") return constant(0.1, 50);
  if (name == "paper-j6") {
    WeightSchedule s;
    s.first = piecewise({{6, 0.1}, {27, 0.15}, {35, 0.2}, {59, 0.25}, {71, 0.3}, {72, 0.35}});
    s.second = piecewise({{6, 0.1}, {26, 0.15}, {34, 0.2}, {58, 0.25}, {71, 0.3}, {72, 0.35}});
    s.max_iterations = 72;
    return s;
  }
  throw ParameterError("unknown schedule preset '" + name + "' (j3-default, paper-j6)");
}

WeightSchedule WeightSchedule::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("", "schedule must be an object");
  WeightSchedule s;
  if (!doc.contains("max_iterations") || !doc["max_iterations"].is_number_integer()) {
    throw SchemaError("/max_iterations", "required integer");
  }
  s.max_iterations = doc["max_iterations"].get<int>();
  auto read_list = [&](const char* key) {
    const std::string path = std::string("/") + key;
    const auto& v = doc.at(key);
    if (!v.is_array() || v.empty()) throw SchemaError(path, "must be a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw SchemaError(path + "/" + std::to_string(i), "must be a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  };
  if (doc.contains("w")) {
    if (!doc["w"].is_number()) throw SchemaError("/w", "must be a number");
    s.first = s.second = {doc["w"].get<double>()};
  } else {
    if (!doc.contains("w1")) throw SchemaError("/w1", "missing (or give a constant \"w\")");
    if (!doc.contains("w2")) throw SchemaError("/w2", "missing (or give a constant \"w\")");
    s.first = read_list("w1");
    s.second = read_list("w2");
  }
  try {
    s.validate();
  } catch (const ParameterError& e) {
    throw SchemaError("", e.what());
  }
  return s;
}

nlohmann::json WeightSchedule::to_json() const {
  return {{"max_iterations", max_iterations}, {"w1", first}, {"w2", second}};
}

RankOne extract_rank_one(const CMatrix& X, double max_ratio) {
  if (X.rows() != X.cols() || X.rows() == 0) throw ParameterError("rank-one extraction needs a square matrix");
  const auto e = hermitian_eigen(X);
  RankOne out;
  out.sigma1 = std::max(0.0, e.values(0));
  out.sigma2 = e.values.size() > 1 ? std::max(0.0, e.values(1)) : 0.0;
  if (!(out.sigma1 > 0.0)) throw RankExtractionError("matrix has no positive eigenvalue", 1.0);
  const double ratio = out.sigma2 / out.sigma1;
  if (ratio > max_ratio) {
    throw RankExtractionError("sigma2/sigma1 = " + std::to_string(ratio) + " exceeds " +
                                  std::to_string(max_ratio),
                              ratio);
  }
  CVector x = std::sqrt(out.sigma1) * e.vectors.col(0);
  Eigen::Index arg = 0;
  x.cwiseAbs().maxCoeff(&arg);
  x *= std::abs(x(arg)) / x(arg);
  x(arg) = std::abs(x(arg));
  out.x = std::move(x);
  return out;
}

CodebookCollection random_initial_collection(const SystemDims& dims, double budget,
                                             std::uint64_t seed, double imaginary_jitter) {
  if (!(imaginary_jitter >= 0.0) || !std::isfinite(imaginary_jitter)) {
    throw ParameterError("imaginary jitter must be finite and nonnegative");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<CMatrix> c;
  for (int j = 0; j < dims.users(); ++j) {
    CMatrix m(dims.nonzeros(), dims.codebook_size());
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      for (Eigen::Index row = 0; row < m.rows(); ++row) m(row, col) = unit(rng);
    }
    c.push_back(std::move(m));
  }
  if (imaginary_jitter > 0.0) {
    for (auto& m : c) {
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] += cplx(0.0, imaginary_jitter * normal(rng));
    }
  }
  return normalize_each_user(CodebookCollection(dims, std::move(c)), budget);
}

DesignResult run_algorithm1(const CodebookCollection& init, const WeightSchedule& schedule,
                            const QcqpInstance& instance, const SolverConfig& config,
                            const DesignOptions& options) {
  schedule.validate();
  const auto& dims = instance.dims();
  if (!(init.dims() == dims)) throw ParameterError("initial collection does not match the instance");
  for (int j = 1; j <= dims.users(); ++j) {
    if (std::abs(init.user_power(j) - instance.power_budget()) > 1e-6 * instance.power_budget()) {
      throw ParameterError("initial collection must give every user power P (user " +
                           std::to_string(j) + " has " + std::to_string(init.user_power(j)) + ")");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  DesignTrace trace;
  trace.initial_med = med(init).d_min;

  const CVector x0 = vectorize(init);
  CMatrix X2 = x0 * x0.adjoint();
  double t2 = PairTraceTable(dims, X2).operator()(1, 2);
  PairTraceTable(dims, X2).for_each_pair(
      [&](std::uint64_t, std::uint64_t, double v) { t2 = std::min(t2, v); });
  CMatrix X1 = X2;
  double t1 = t2;

  std::optional<CodebookCollection> best;
  double best_med = -1.0;
  std::vector<std::uint64_t> active;

  for (int phi = 1; phi <= schedule.max_iterations; ++phi) {
    DesignIteration rec;
    rec.phi = phi;
    rec.w1 = schedule.weight_first(phi);
    rec.w2 = schedule.weight_second(phi);

    auto s1 = solve_penalized(instance, X2, t2, rec.w1, config, active);
    X1 = s1.X;
    t1 = s1.t;
    active = s1.active_pairs;
    rec.objective_after_first = s1.objective;

    auto s2 = solve_penalized(instance, X1, t1, rec.w2, config, active);
    X2 = s2.X;
    t2 = s2.t;
    active = s2.active_pairs;
    rec.objective_after_second = s2.objective;

    rec.t1 = t1;
    rec.t2 = t2;
    rec.penalty_residual = std::abs(X1.trace().real() * X2.trace().real() - trace_product(X1, X2));
    const auto eig = hermitian_eigen(X2);
    rec.sigma_ratio = eig.values(0) > 0 ? std::max(0.0, eig.values(1)) / eig.values(0) : 1.0;
    rec.relative_difference = (X1 - X2).norm() / X2.norm();
    rec.active_pairs = active.size();
    rec.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    trace.iterations.push_back(rec);

    if (rec.sigma_ratio <= options.rank_ratio) {
      const auto r1 = extract_rank_one(X2, options.rank_ratio);
      auto candidate = devectorize(r1.x, dims);
      const double d = med(candidate).d_min;
      if (d > best_med) {
        best_med = d;
        best = std::move(candidate);
      }
    }
    if (s1.status != SolveStatus::optimal || s2.status != SolveStatus::optimal) {
      trace.status = "solver-failure";
      throw DesignConvergenceError("penalized SDP did not reach optimality at iteration " +
                                       std::to_string(phi),
                                   std::move(trace), std::move(best));
    }
    if (rec.penalty_residual < options.penalty_tol) break;
  }

  const bool penalty_met = !trace.iterations.empty() &&
                           trace.iterations.back().penalty_residual < options.penalty_tol;
  RankOne r1;
  try {
    r1 = extract_rank_one(X2, options.rank_ratio);
  } catch (const RankExtractionError& e) {
    trace.status = "rank-failure";
    throw DesignConvergenceError(std::string("failure of convergence: ") + e.what(),
                                 std::move(trace), std::move(best));
  }
  trace.status = penalty_met ? "converged" : "max-iterations";

  auto collection = devectorize(r1.x, dims);
  auto summary = med(collection);
  DesignResult out{std::move(collection), std::move(summary), std::move(trace), r1.sigma1,
                   r1.sigma2, std::nullopt};
  if (options.check_weak_duality) {
    const auto cert = solve_dual(instance, config);
    out.dual_bound = std::sqrt(cert.bound);
    if (out.med.d_min > *out.dual_bound * (1.0 + 1e-6)) {
      throw SolverError("designed MED " + std::to_string(out.med.d_min) +
                        " exceeds the dual bound " + std::to_string(*out.dual_bound));
    }
  }
  return out;
}

MedUpperBound compute_med_upper_bound(const SystemDims& dims, double budget,
                                      const SolverConfig& config) {
  const QcqpInstance instance(dims, budget);
  MedUpperBound out;
  out.certificate = solve_dual(instance, config);
  out.bound = std::sqrt(out.certificate.bound);
  out.support_size = out.certificate.pairs.size();
  return out;
}

}  // namespace scma
