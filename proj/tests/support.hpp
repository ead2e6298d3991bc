#pragma once

#include <cmath>
#include <random>

#include "scma/codebook_io.hpp"
#include "scma/core.hpp"

namespace scma::test {

inline CodebookCollection appendix_b() { return read_codebook(bundled_codebook_path("appendix-b")); }
inline CodebookCollection appendix_c() { return read_codebook(bundled_codebook_path("appendix-c")); }

// Complex Gaussian entries on the standard structure.
inline CodebookCollection random_collection(int users, std::mt19937_64& rng) {
  const SystemDims dims = SystemDims::standard(users);
  std::normal_distribution<double> g;
  std::vector<CMatrix> cs;
  for (int j = 0; j < users; ++j) {
    CMatrix C(dims.nonzeros(), dims.codebook_size());
    for (Eigen::Index i = 0; i < C.size(); ++i) C(i) = cplx(g(rng), g(rng));
    cs.push_back(C);
  }
  return CodebookCollection(dims, cs);
}

// |a - b| / |b|, for values far below one.
inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace scma::test
