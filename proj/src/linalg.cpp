#include "scma/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scma/errors.hpp"

namespace scma {

HermitianEigen hermitian_eigen(const CMatrix& input) {
  if (input.rows() != input.cols()) throw ParameterError("eigendecomposition needs a square matrix");
  const Eigen::Index n = input.rows();
  CMatrix A = hermitian_part(input);
  CMatrix V = CMatrix::Identity(n, n);

  const double scale = A.norm();
  if (scale > 0.0 && std::isfinite(scale)) {
    const double target = 1e-15 * scale;
    for (int sweep = 0; sweep < 100; ++sweep) {
      double off = 0.0;
      for (Eigen::Index q = 1; q < n; ++q) {
        for (Eigen::Index p = 0; p < q; ++p) off += std::norm(A(p, q));
      }
      if (std::sqrt(2.0 * off) <= target) break;
      // Skip tiny entries during the first sweeps.
      const double threshold = sweep < 3 ? 0.2 * std::sqrt(off) / static_cast<double>(n * n) : 0.0;

      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const double b = std::abs(A(p, q));
          if (b == 0.0 || b < threshold) continue;
          const double app = A(p, p).real();
          const double aqq = A(q, q).real();
          if (sweep > 3 && b < 1e-18 * (std::abs(app) + std::abs(aqq))) {
            A(p, q) = A(q, p) = 0.0;
            continue;
          }
          const cplx phase = A(p, q) / b;  // e^{i phi}
          const double theta = (aqq - app) / (2.0 * b);
          const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          const cplx ph = std::conj(phase);  // e^{-i phi}

          // A <- A G with G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on columns p, q.
          for (Eigen::Index k = 0; k < n; ++k) {
            const cplx akp = A(k, p);
            const cplx akq = A(k, q);
            A(k, p) = c * akp - s * ph * akq;
            A(k, q) = s * akp + c * ph * akq;
          }
          // A <- G^H A on rows p, q.
          for (Eigen::Index k = 0; k < n; ++k) {
            const cplx apk = A(p, k);
            const cplx aqk = A(q, k);
            A(p, k) = c * apk - s * phase * aqk;
            A(q, k) = s * apk + c * phase * aqk;
          }
          A(p, q) = A(q, p) = 0.0;
          A(p, p) = A(p, p).real();
          A(q, q) = A(q, q).real();
          for (Eigen::Index k = 0; k < n; ++k) {
            const cplx vkp = V(k, p);
            const cplx vkq = V(k, q);
            V(k, p) = c * vkp - s * ph * vkq;
            V(k, q) = s * vkp + c * ph * vkq;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return A(a, a).real() > A(b, b).real(); });
  HermitianEigen out{Eigen::VectorXd(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = A(order[i], order[i]).real();
    out.vectors.col(i) = V.col(order[i]);
  }
  return out;
}

double min_eigenvalue(const CMatrix& A) {
  if (A.rows() == 0) return 0.0;
  const auto e = hermitian_eigen(A);
  return e.values(e.values.size() - 1);
}

CMatrix project_psd(const CMatrix& A) {
  const auto e = hermitian_eigen(A);
  const Eigen::VectorXd clipped = e.values.cwiseMax(0.0);
  CMatrix out = e.vectors * clipped.asDiagonal() * e.vectors.adjoint();
  return hermitian_part(out);
}

double max_psd_step(const CMatrix& X, const CMatrix& dX) {
  Eigen::LLT<CMatrix> llt(hermitian_part(X));
  if (llt.info() != Eigen::Success) throw SolverError("step length: matrix is not positive definite");
  // L^{-1} dX L^{-H}
  CMatrix T = llt.matrixL().solve(hermitian_part(dX));
  T = llt.matrixL().solve(T.adjoint()).adjoint();
  const double lo = min_eigenvalue(T);
  if (lo >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lo;
}

}  // namespace scma
