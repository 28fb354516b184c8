#pragma once

namespace bcg {

// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1). Real d is
// accepted because d = np + r shows up with non-integer r.
double kappa(double d);
// Surface area of the unit sphere S^{d-1}, d * kappa(d).
double omega(double d);

// Memoized integer tables of kappa and omega.
class BallConstants {
 public:
  static double kappa(int d);
  static double omega(int d);
};

}  // namespace bcg
