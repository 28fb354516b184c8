#include "bcg/ncla_suite.hpp"

#include <algorithm>
#include <cmath>

#include "bcg/montecarlo.hpp"
#include "bcg/ncla.hpp"

namespace bcg {

namespace {

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

void record(PropertyResult& r, double err, double tol) {
  r.max_rel_error = std::max(r.max_rel_error, err);
  ++r.checks;
  if (!(err <= tol)) r.passed = false;
}

}  // namespace

std::vector<PropertyResult> ncla_property_suite(Field f, int trials, std::uint64_t seed, int max_n, double tol) {
  std::vector<PropertyResult> out{{"multiplicativity"}, {"adjoint"},          {"row_swap"},
                                  {"realification"},    {"right_mult_operator"}, {"row_expansion"},
                                  {"minor_magnitudes"}};
  const int p = real_dim(f);
  Rng rng(derive_seed(seed, 0x6e636c61));
  std::uniform_int_distribution<int> dim(1, max_n);
  std::uniform_int_distribution<int> mdim(1, 3);
  for (int t = 0; t < trials; ++t) {
    const int n = dim(rng);
    const FMat a = random_gaussian(f, n, n, rng);
    const FMat b = random_gaussian(f, n, n, rng);
    const double da = det_abs(a).value;

    record(out[0], rel(det_abs(a * b).value, da * det_abs(b).value), tol);
    record(out[1], rel(det_abs(adjoint(a)).value, da), tol);

    if (n >= 2) {
      std::uniform_int_distribution<int> pick(0, n - 1);
      const int i = pick(rng);
      int j = pick(rng);
      if (j == i) j = (i + 1) % n;
      FMat s = a;
      for (int c = 0; c < n; ++c) std::swap(s(i, c), s(j, c));
      record(out[2], rel(det_abs(s).value, da), tol);
    }

    record(out[3], rel(std::pow(da, p), std::abs(realify(a).partialPivLu().determinant())), tol);

    const int m = mdim(rng);
    record(out[4], rel(std::pow(da, m * p), std::abs(right_multiplication_operator(a, m).partialPivLu().determinant())),
           tol);

    if (n >= 2) {
      const auto lambda = row_expansion(a);
      Scalar s = Scalar::zero(f);
      for (int k = 0; k < n; ++k) s = s + a(0, k) * lambda[static_cast<std::size_t>(k)];
      record(out[5], rel(norm(s), da), tol);
      double worst = 0.0;
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, rel(norm(lambda[static_cast<std::size_t>(k)]), det_abs(minor_matrix(a, 0, k)).value));
      record(out[6], worst, tol);
    }
  }
  return out;
}

}  // namespace bcg
