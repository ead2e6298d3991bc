// Alternating-direction augmented Lagrangian method on the dual of the restricted
// max-min SDP, written in standard conic form
//
//   min <c, x>  s.t.  A x = b,  x = (X, s, t) in PSD x R+^m x R
//
// with c = (-C, 0, -1). Each iteration solves one linear system with the cached
// Cholesky factor of A A^T and projects onto the dual cone PSD x R+^m x {0}.

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

#include "scma/errors.hpp"
#include "scma/linalg.hpp"
#include "scma/sdp.hpp"

namespace scma::detail {

RestrictedResult solve_restricted_admm(const RestrictedProblem& p, const SolverConfig& config) {
  const int m = static_cast<int>(p.pairs.size());
  const int J = p.users;
  const int n = p.dim;
  const int rows = m + J;
  if (m < 1) throw ParameterError("restricted problem needs at least one pair constraint");
  const double b_val = p.power_target;
  const CMatrix C = p.objective.size() > 0 ? hermitian_part(p.objective) : CMatrix::Zero(n, n);

  // Real symmetric constraint matrices as rows over the n*n entries (column-major).
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < m; ++i) {
    for (const auto& g : p.pairs[i].rows) {
      for (const auto& [a, sa] : g) {
        for (const auto& [c, sc] : g) trips.emplace_back(i, a + c * n, sa * sc);
      }
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int a = j * p.block; a < (j + 1) * p.block; ++a) trips.emplace_back(m + j, a + a * n, 1.0);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> Amat(rows, n * n);
  Amat.setFromTriplets(trips.begin(), trips.end());

  Eigen::MatrixXd gram = Eigen::MatrixXd(Amat * Amat.transpose());
  gram.topLeftCorner(m, m).array() += 1.0;  // t column
  gram.diagonal().head(m).array() += 1.0;   // s columns
  const Eigen::LLT<Eigen::MatrixXd> gram_llt(gram);
  if (gram_llt.info() != Eigen::Success) throw SolverError("constraint Gram matrix is singular");

  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  b.tail(J).setConstant(b_val);

  auto apply = [&](const CMatrix& X, const Eigen::VectorXd& s, double t) {
    const Eigen::MatrixXd Xr = X.real();
    Eigen::VectorXd out = Amat * Eigen::Map<const Eigen::VectorXd>(Xr.data(), n * n);
    out.head(m).array() -= s.array() + t;
    return out;
  };
  auto adjoint_X = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd v = Amat.transpose() * y;
    return CMatrix(Eigen::Map<Eigen::MatrixXd>(v.data(), n, n).cast<cplx>());
  };

  // Primal x = (X, s, t), dual slack S = (SX, Ss, 0), multipliers y.
  CMatrix X = CMatrix::Identity(n, n) * (b_val / p.block);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(m);
  double t = 0.0;
  CMatrix SX = CMatrix::Zero(n, n);
  Eigen::VectorXd Ss = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
  double mu = 1.0;

  RestrictedResult out;
  const double b_norm = b.norm();
  const double c_norm = std::sqrt(C.squaredNorm() + 1.0);
  for (int iter = 1; iter <= config.admm_max_iterations; ++iter) {
    // y = (A A^T)^{-1} (mu (b - A x) + A (c - S))
    Eigen::VectorXd rhs = mu * (b - apply(X, s, t)) + apply(-C - SX, -Ss, -1.0);
    y = gram_llt.solve(rhs);

    const CMatrix AtyX = adjoint_X(y);
    const Eigen::VectorXd Atys = -y.head(m);
    const double Atyt = -y.head(m).sum();

    const CMatrix VX = hermitian_part(-C - AtyX - mu * X);
    const Eigen::VectorXd Vs = -Atys - mu * s;
    const double Vt = -1.0 - Atyt - mu * t;

    SX = project_psd(VX);
    Ss = Vs.cwiseMax(0.0);
    const CMatrix X_new = (SX - VX) / mu;
    const Eigen::VectorXd s_new = (Ss - Vs) / mu;
    const double t_new = -Vt / mu;

    const double change = std::sqrt((X_new - X).squaredNorm() + (s_new - s).squaredNorm() +
                                    (t_new - t) * (t_new - t));
    X = X_new;
    s = s_new;
    t = t_new;

    const double pinf = (apply(X, s, t) - b).norm() / (1.0 + b_norm);
    const double dinf = mu * change / (1.0 + c_norm);
    const double pobj = t + (C.array().conjugate() * X.array()).real().sum();
    const double dobj = -b_val * y.tail(J).sum();
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    out.kkt = {pinf, dinf, gap};
    out.iterations = iter;
    if (config.trace && iter % 100 == 0) {
      config.trace({"admm", iter, pobj, pinf, dinf, gap, static_cast<std::size_t>(m)});
    }
    if (pinf < config.feasibility_tol && dinf < config.feasibility_tol && gap < config.gap_tol) {
      out.status = SolveStatus::optimal;
      break;
    }
    if (iter % 20 == 0) {
      if (pinf > 5.0 * dinf) {
        mu = std::max(mu * 0.7, 1e-4);
      } else if (dinf > 5.0 * pinf) {
        mu = std::min(mu / 0.7, 1e4);
      }
    }
  }

  out.X = hermitian_part(X);
  out.t = t;
  out.lambda = y.head(m);
  out.mu = -y.tail(J);
  return out;
}

}  // namespace scma::detail
