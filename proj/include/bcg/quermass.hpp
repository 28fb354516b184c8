#pragma once

#include <cstdint>
#include <vector>

#include "bcg/bodies.hpp"
#include "bcg/subspace.hpp"

namespace bcg {

struct QuermassOptions {
  std::uint64_t outer = 20000;  // subspaces
  std::uint64_t inner = 4096;   // draws per section volume estimate
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t volume_samples = 1000000;
};

// |K cap E|: exact for ellipsoids; radial estimator kappa_k E rho^k when the
// origin is inside K; hit-or-miss in the section's proposal region otherwise.
Estimate section_volume(const ConvexBody& k, const Subspace& e, std::uint64_t samples, Rng& rng);

// int |K cap E|^n dE; each |K cap E|^n is a product of n independent estimates.
Estimate dual_affine_quermass(const ConvexBody& k, int m, const QuermassOptions& opt);

// int |P_E K|^{-n} dE. Ellipsoids (any m) or, for m = 1, unit-scalar
// invariant bodies with a support function. Throws UnsupportedBodyForProjection.
Estimate affine_quermass(const ConvexBody& k, int m, const QuermassOptions& opt);

struct Comparison {
  Estimate lhs;
  Estimate rhs;
  double difference = 0.0;  // lhs - rhs
  double sigma = 0.0;
  double margin_sigmas = 0.0;  // difference / sigma
};

// Quermassintegral of K against that of gK; |det g| must be 1 within 1e-9.
Comparison sl_invariance_test(const ConvexBody& k, int m, const FMat& g, bool dual, const QuermassOptions& opt);

// lhs = prod |K_i|, rhs = kappa_np^m / kappa_mp^n int prod |K_i cap E|^{n/m} dE.
Comparison intersection_inequality_check(const std::vector<ConvexBody>& bodies, const QuermassOptions& opt);

struct SantaloReport {
  // E_E h(u_E)^{-np} against |K*| / kappa_np from an independent sphere average.
  Comparison identity;
  // |K|^{-1} against (kappa_p^n / kappa_np) int |P_E K|^{-n} dE.
  Comparison inequality;
  double volume = 0.0;
  double polar_volume = 0.0;
};

// Needs unit-scalar invariance (throws NotUnitScalarInvariant) and 0 inside.
SantaloReport santalo_case(const ConvexBody& k, const QuermassOptions& opt);

struct ConjectureReport {
  // |K|^{-m} against (kappa_mp^n / kappa_np^m) int |P_E K|^{-n} dE
  Comparison conj;
  // kappa_np^{m/n} / kappa_mp int |P_E K| dE against |K|^{m/n}
  Comparison iso;
};

ConjectureReport conjecture_eval(const ConvexBody& k, int m, const QuermassOptions& opt);

}  // namespace bcg
