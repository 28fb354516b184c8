#pragma once

#include <vector>

#include "bcg/functionals.hpp"
#include "bcg/symmetrize.hpp"

namespace bcg {

// E_a = {|z1|^2 / a^2 + a^2 |z2|^2 <= 1} in C^2; |det| of the defining map is 1.
ConvexBody aspect_ellipsoid(double a);

struct CounterexampleReport {
  double a = 1.0;
  double r = 2.0;
  Vec normal;          // real normal of the Steiner hyperplane used
  Estimate steiner;    // B(S_H E_a, S_H E_a)
  double exact = 0.0;  // B(E_a, E_a) = B_balls_exact(2, 2, r)
  double delta = 0.0;
  double delta_sigmas = 0.0;
  Estimate control;    // after symmetrizing in the complex hyperplane {z1 = 0}
  double control_delta = 0.0;
  double control_sigmas = 0.0;
  // Set when the default normal was not significant and a scan was run.
  bool scanned = false;
};

// Default normal u = (1, 0, 1, 0) / sqrt 2; when delta / sigma < 3 the
// normals (cos t, 0, sin t, 0) are scanned and the best witness is kept.
CounterexampleReport counterexample(double a, double r, const FunctionalOptions& opt);

}  // namespace bcg
