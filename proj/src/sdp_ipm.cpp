// Primal-dual path-following solver for the restricted max-min SDP
//
//   max  t + <C, X>
//   s.t. <A_i, X> - t - s_i = 0,  s >= 0        (pair rows)
//        <B_j, X> = b                           (power rows)
//        X Hermitian PSD
//
// with dual  min b sum_j mu_j  s.t.  Z = sum_j mu_j B_j - sum_i lambda_i A_i - C PSD,
// sum_i lambda_i = 1, lambda >= 0. Internally y = (lambda, -mu) so that
// Z = -sum_k y_k G_k - C with G = (A_1..A_m, B_1..B_J). HKM search direction with
// Mehrotra predictor-corrector.

#include <algorithm>
#include <cmath>
#include <limits>

#include "scma/errors.hpp"
#include "scma/linalg.hpp"
#include "scma/sdp.hpp"

namespace scma::detail {
namespace {

struct Operators {
  const RestrictedProblem& p;
  int m;  // pair rows
  int J;  // power rows

  explicit Operators(const RestrictedProblem& prob)
      : p(prob), m(static_cast<int>(prob.pairs.size())), J(prob.users) {}

  int rows() const { return m + J; }

  // Re <G_k, Y> for every row k.
  Eigen::VectorXd apply(const CMatrix& Y) const {
    Eigen::VectorXd out(rows());
    for (int i = 0; i < m; ++i) {
      double v = 0.0;
      for (const auto& g : p.pairs[i].rows) {
        for (const auto& [a, sa] : g) {
          for (const auto& [b, sb] : g) v += sa * sb * Y(b, a).real();
        }
      }
      out(i) = v;
    }
    for (int j = 0; j < J; ++j) {
      double v = 0.0;
      for (int a = j * p.block; a < (j + 1) * p.block; ++a) v += Y(a, a).real();
      out(m + j) = v;
    }
    return out;
  }

  // sum_k y_k G_k
  CMatrix adjoint(const Eigen::VectorXd& y) const {
    CMatrix S = CMatrix::Zero(p.dim, p.dim);
    for (int i = 0; i < m; ++i) {
      if (y(i) == 0.0) continue;
      for (const auto& g : p.pairs[i].rows) {
        for (const auto& [a, sa] : g) {
          for (const auto& [b, sb] : g) S(a, b) += y(i) * sa * sb;
        }
      }
    }
    for (int j = 0; j < J; ++j) {
      for (int a = j * p.block; a < (j + 1) * p.block; ++a) S(a, a) += y(m + j);
    }
    return S;
  }
};

double inner(const CMatrix& A, const CMatrix& B) {
  // Re tr(A^H B)
  return (A.array().conjugate() * B.array()).real().sum();
}

double max_step_vec(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  }
  return a;
}

// HKM Schur complement: H_kl = Re tr(G_k X G_l Z^{-1}).
Eigen::MatrixXd schur_matrix(const RestrictedProblem& p, const CMatrix& X, const CMatrix& Zi) {
  const int m = static_cast<int>(p.pairs.size());
  const int J = p.users;
  const int n = p.dim;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + J, m + J);

  std::vector<CMatrix> T(m);
  std::vector<CMatrix> U(m);
  for (int k = 0; k < m; ++k) {
    const auto& rows = p.pairs[k].rows;
    const auto r = static_cast<Eigen::Index>(rows.size());
    T[k] = CMatrix::Zero(n, r);  // column r holds (g_r^T X)^T
    U[k] = CMatrix::Zero(n, r);
    for (Eigen::Index q = 0; q < r; ++q) {
      for (const auto& [a, sa] : rows[q]) {
        T[k].col(q) += static_cast<double>(sa) * X.row(a).transpose();
        U[k].col(q) += static_cast<double>(sa) * Zi.row(a).transpose();
      }
    }
  }

  for (int k = 0; k < m; ++k) {
    const auto& Tk = T[k];
    const auto& Uk = U[k];
    const Eigen::Index rk = Tk.cols();
    for (int l = k; l < m; ++l) {
      const auto& rows_l = p.pairs[l].rows;
      double v = 0.0;
      for (const auto& g : rows_l) {
        for (Eigen::Index q = 0; q < rk; ++q) {
          cplx P = 0.0;
          cplx Q = 0.0;
          for (const auto& [b, sb] : g) {
            P += static_cast<double>(sb) * Tk(b, q);
            Q += static_cast<double>(sb) * Uk(b, q);
          }
          v += (P * std::conj(Q)).real();
        }
      }
      H(k, l) = v;
      H(l, k) = v;
    }
    for (int j = 0; j < J; ++j) {
      const auto blk = Eigen::seqN(j * p.block, p.block);
      const double v = (Tk(blk, Eigen::all).array() * Uk(blk, Eigen::all).array().conjugate())
                           .real()
                           .sum();
      H(k, m + j) = v;
      H(m + j, k) = v;
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int jj = j; jj < J; ++jj) {
      const auto bj = Eigen::seqN(j * p.block, p.block);
      const auto bjj = Eigen::seqN(jj * p.block, p.block);
      const double v =
          (X(bj, bjj).array() * Zi(bj, bjj).array().conjugate()).real().sum();
      H(m + j, m + jj) = v;
      H(m + jj, m + j) = v;
    }
  }
  return H;
}

class BorderedSolver {
 public:
  BorderedSolver(Eigen::MatrixXd H, Eigen::VectorXd f) : f_(std::move(f)) {
    const Eigen::Index n = H.rows();
    double reg = 0.0;
    const double scale = std::max(1e-300, H.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd Hr = H;
      if (reg > 0.0) Hr.diagonal().array() += reg;
      llt_.compute(Hr);
      if (llt_.info() == Eigen::Success) break;
      reg = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
    }
    if (llt_.info() != Eigen::Success) throw SolverError("Schur complement factorization failed");
    (void)n;
    v_ = llt_.solve(f_);
    fv_ = f_.dot(v_);
    if (!(std::abs(fv_) > 0.0)) throw SolverError("degenerate bordered system");
  }

  // Solves [H f; f^T 0][y; dt] = [h; r].
  std::pair<Eigen::VectorXd, double> solve(const Eigen::VectorXd& h, double r) const {
    const Eigen::VectorXd u = llt_.solve(h);
    const double dt = (f_.dot(u) - r) / fv_;
    return {u - v_ * dt, dt};
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd f_;
  Eigen::VectorXd v_;
  double fv_ = 0.0;
};

}  // namespace

RestrictedResult solve_restricted_ipm(const RestrictedProblem& p, const SolverConfig& config) {
  const Operators ops(p);
  const int m = ops.m;
  const int J = ops.J;
  const int n = p.dim;
  if (m < 1) throw ParameterError("restricted problem needs at least one pair constraint");
  const double b = p.power_target;
  const bool has_c = p.objective.size() > 0;
  const CMatrix C = has_c ? hermitian_part(p.objective) : CMatrix::Zero(n, n);

  Eigen::VectorXd f = Eigen::VectorXd::Zero(m + J);
  f.head(m).setConstant(-1.0);
  Eigen::VectorXd target = Eigen::VectorXd::Zero(m + J);
  target.tail(J).setConstant(b);

  // Strictly feasible start.
  CMatrix X = CMatrix::Identity(n, n) * (b / p.block);
  Eigen::VectorXd gx = ops.apply(X);
  double t = gx.head(m).minCoeff() - 1.0;
  Eigen::VectorXd s = gx.head(m).array() - t;
  Eigen::VectorXd lam = Eigen::VectorXd::Constant(m, 1.0 / m);
  Eigen::VectorXd y(m + J);
  y.head(m) = lam;
  y.tail(J).setZero();
  CMatrix S = ops.adjoint(y) + C;
  double gersh = 0.0;
  for (int a = 0; a < n; ++a) gersh = std::max(gersh, S.row(a).cwiseAbs().sum());
  const double mu0 = gersh + std::max(1.0, 0.1 * gersh);
  y.tail(J).setConstant(-mu0);
  CMatrix Z = -ops.adjoint(y) - C;

  const double c_norm = C.norm();
  RestrictedResult out;
  constexpr double kStep = 0.95;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    gx = ops.apply(X);
    Eigen::VectorXd Rp = gx - target;
    Rp.head(m).array() -= t + s.array();
    const CMatrix Rd = -ops.adjoint(y) - C - Z;
    const double Rt = y.head(m).sum() - 1.0;

    const double xz = inner(X, Z);
    const double sl = s.dot(y.head(m));
    const double nu = (xz + sl) / (n + m);
    const double pobj = t + (has_c ? inner(C, X) : 0.0);
    const double dobj = -b * y.tail(J).sum();
    const double scale = 1.0 + std::abs(pobj) + std::abs(dobj);
    const double pinf = Rp.norm() / (1.0 + b);
    const double dinf = (Rd.norm() + std::abs(Rt)) / (1.0 + c_norm);
    const double gap = (xz + sl) / scale;

    out.iterations = iter;
    out.kkt = {pinf, dinf, gap};
    if (config.trace) {
      config.trace({"ipm", iter, pobj, pinf, dinf, gap, static_cast<std::size_t>(m)});
    }
    if (pinf < config.feasibility_tol && dinf < config.feasibility_tol && gap < config.gap_tol) {
      out.status = SolveStatus::optimal;
      break;
    }

    Eigen::LLT<CMatrix> zllt(Z);
    if (zllt.info() != Eigen::Success) throw SolverError("dual slack lost definiteness");
    CMatrix Zi = zllt.solve(CMatrix::Identity(n, n));
    Zi = hermitian_part(Zi);

    Eigen::MatrixXd H = schur_matrix(p, X, Zi);
    const Eigen::VectorXd lam_now = y.head(m);
    const Eigen::VectorXd D = s.array() / lam_now.array();
    H.diagonal().head(m) += D;
    const BorderedSolver solver(std::move(H), f);

    const CMatrix XRdZi = X * Rd * Zi;
    auto direction = [&](double sigma_nu, const CMatrix* corr_mat, const Eigen::VectorXd* corr_vec,
                         CMatrix& dX, double& dt, Eigen::VectorXd& ds, Eigen::VectorXd& dy,
                         CMatrix& dZ) {
      CMatrix W = sigma_nu * Zi - X - XRdZi;
      if (corr_mat) W -= *corr_mat;
      Eigen::VectorXd c = (Eigen::VectorXd::Constant(m, sigma_nu) - s.cwiseProduct(lam_now));
      if (corr_vec) c -= *corr_vec;
      c = c.cwiseQuotient(lam_now);
      Eigen::VectorXd h = -Rp - ops.apply(W);
      h.head(m) += c;
      auto [dy_, dt_] = solver.solve(h, Rt);
      dy = std::move(dy_);
      dt = dt_;
      dZ = Rd - ops.adjoint(dy);
      dX = hermitian_part(W - X * (dZ - Rd) * Zi);
      ds = c - D.cwiseProduct(dy.head(m));
    };

    auto steps = [&](const CMatrix& dX, const Eigen::VectorXd& ds, const Eigen::VectorXd& dy,
                     const CMatrix& dZ) {
      const double ap = std::min({1.0, kStep * max_psd_step(X, dX), kStep * max_step_vec(s, ds)});
      const double ad = std::min(
          {1.0, kStep * max_psd_step(Z, dZ), kStep * max_step_vec(lam_now, dy.head(m))});
      return std::pair{ap, ad};
    };

    CMatrix dX;
    CMatrix dZ;
    Eigen::VectorXd ds;
    Eigen::VectorXd dy;
    double dt = 0.0;
    direction(0.0, nullptr, nullptr, dX, dt, ds, dy, dZ);
    auto [ap, ad] = steps(dX, ds, dy, dZ);
    const double nu_aff = (inner(X + ap * dX, Z + ad * dZ) +
                           (s + ap * ds).dot(lam_now + ad * dy.head(m))) /
                          (n + m);
    const double sigma = std::clamp(std::pow(nu_aff / nu, 3.0), 0.0, 1.0);

    const CMatrix corr_mat = dX * dZ * Zi;
    const Eigen::VectorXd corr_vec = ds.cwiseProduct(dy.head(m));
    direction(sigma * nu, &corr_mat, &corr_vec, dX, dt, ds, dy, dZ);
    std::tie(ap, ad) = steps(dX, ds, dy, dZ);

    X = hermitian_part(X + ap * dX);
    t += ap * dt;
    s += ap * ds;
    y += ad * dy;
    Z = hermitian_part(Z + ad * dZ);
    out.iterations = iter + 1;
  }

  out.X = X;
  out.t = t;
  out.lambda = y.head(m);
  out.mu = -y.tail(J);
  return out;
}

}  // namespace scma::detail
