#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bcg/bodies.hpp"

namespace bcg {

// Strictly increasing Phi on [0, inf).
class Weight {
 public:
  static Weight power(double r);
  // Spot-checks monotonicity on a grid; throws InvalidArgument otherwise.
  static Weight custom(std::function<double(double)> phi);

  double operator()(double t) const { return power_ ? (r_ == 0.0 ? 1.0 : std::pow(t, r_)) : phi_(t); }
  bool is_power() const { return power_; }
  double exponent() const { return r_; }

 private:
  bool power_ = true;
  double r_ = 1.0;
  std::function<double(double)> phi_;
};

struct FunctionalOptions {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  int workers = 1;
  // Only used for bodies without exact volume.
  std::uint64_t volume_samples = 1000000;
};

// prod |K_i| * E Phi(|det(x_1..x_n)|), x_i uniform in K_i in F^n.
Estimate B_functional(const std::vector<ConvexBody>& bodies, const Weight& phi, const FunctionalOptions& opt);

// Value of the above for n unit balls of F^n and Phi = t^r.
double B_balls_exact(int n, int p, double r);

// prod |K_i| * E Phi(|x_1 l_1 + ... + x_m l_m|) for bodies in F (n = 1).
// Without lambda all l_i = 1.
Estimate M_functional(const std::vector<ConvexBody>& bodies, const Weight& phi,
                      const std::optional<std::vector<Scalar>>& lambda, const FunctionalOptions& opt);

struct BrsGap {
  Estimate B_K;
  double B_balls = 0.0;  // balls of the same volumes
  double gap = 0.0;
  double sigma = 0.0;
};

// Power weights only.
BrsGap brs_gap(const std::vector<ConvexBody>& bodies, const Weight& phi, const FunctionalOptions& opt);

}  // namespace bcg
