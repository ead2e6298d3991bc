#pragma once

#include "scma/core.hpp"

namespace scma {

// Eigenpairs of a Hermitian matrix, eigenvalues in nonascending order.
struct HermitianEigen {
  Eigen::VectorXd values;
  CMatrix vectors;  // column i pairs with values(i)
};

// Cyclic Jacobi with threshold sweeps. Only the Hermitian part of `A` is used.
HermitianEigen hermitian_eigen(const CMatrix& A);

double min_eigenvalue(const CMatrix& A);

inline CMatrix hermitian_part(const CMatrix& A) { return 0.5 * (A + A.adjoint()); }

// Nearest PSD matrix in Frobenius norm.
CMatrix project_psd(const CMatrix& A);

// Largest alpha with X + alpha dX PSD, for X positive definite; +inf if unbounded.
double max_psd_step(const CMatrix& X, const CMatrix& dX);

}  // namespace scma
