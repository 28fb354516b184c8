#pragma once

#include <cstdint>
#include <vector>

#include "bcg/bodies.hpp"
#include "bcg/subspace.hpp"

namespace bcg {

// Haar-uniform point of Gr_m(F^n): gaussian n x m matrix, then Gram-Schmidt.
// Throws RetryExhausted after repeated rank deficiency.
Subspace sample_grassmann(int n, int m, Field f, Rng& rng);

// prod_{j<m} omega_{(n-j)p} / omega_{(m-j)p}
double c_constant(int m, int n, int p);
// kappa_{np}^m / kappa_{mp}^n * prod_{j<m} omega_{(m-j)p} / omega_{(n-j)p}
double b_constant(int m, int n, int p);

struct BpResult {
  Estimate lhs;
  Estimate rhs;
};

struct BpOptions {
  std::uint64_t samples = 1000000;  // total inner draws
  int inner = 256;                  // inner draws per subspace
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t volume_samples = 200000;
};

// Both sides of the linear Blaschke-Petkantchin formula for f = prod 1_{K_i}:
// lhs = prod |K_i|, rhs = c_{m,n} E_E int_{E^m} prod 1_{K_i}(x_i) |det(x)|^{(n-m)p}.
// Every body must contain the origin.
BpResult bp_check(const std::vector<ConvexBody>& bodies, const BpOptions& opt);

}  // namespace bcg
