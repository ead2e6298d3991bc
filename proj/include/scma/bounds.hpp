#pragma once

#include <vector>

#include "scma/core.hpp"
#include "scma/sim.hpp"

namespace scma {

// Gaussian tail Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);
// log Q(x); finite for every finite x, accurate far beyond the double underflow point.
double log_q_function(double x);
// exp(z^2) erfc(z).
double erfcx(double z);

struct UnionBound {
  double ser = 0.0;
  double ber = 0.0;
  // Natural logs of the same quantities, usable when the values underflow.
  double log_ser = 0.0;
  double log_ber = 0.0;
};

// Union bounds on the joint-MAP SER and BER, streaming over all pairs k < l:
//   SER <= 1/(M^J J) sum_{k != l} Q(sqrt(d_kl / (2 N0))) D_s[k,l]
//   BER <= 1/(M^J J log2 M) sum_{k != l} Q(sqrt(d_kl / (2 N0))) D_b[k,l]
UnionBound union_bound(const CodebookCollection& collection, double noise_var);
// Same sums over dense M^J x M^J distance and Hamming matrices (small systems only).
UnionBound union_bound_dense(const CodebookCollection& collection, double noise_var);

double ser_bound(const CodebookCollection& collection, double noise_var);
double ber_bound(const CodebookCollection& collection, double noise_var);

// Bound curves over an Eb/N0 grid in the ErrorCurve layout (statistics columns empty).
ErrorCurve predict_curves(const CodebookCollection& collection, const std::vector<double>& ebn0_db);

}  // namespace scma
