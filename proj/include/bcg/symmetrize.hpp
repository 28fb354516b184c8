#pragma once

#include <cstdint>
#include <vector>

#include "bcg/bodies.hpp"

namespace bcg {

// Real hyperplane u^perp in the realified space.
struct RealHyperplane {
  Vec normal;
  // Normalizes u; throws InvalidArgument for u = 0.
  static RealHyperplane from_normal(const Vec& u);
};

// F-hyperplane nu^perp; H^perp = nu F.
struct FHyperplane {
  FVector normal;
  Mat real_normal;  // n p x p, columns nu u_q
  static FHyperplane from_normal(const FVector& nu);
};

struct SymmetrizeOptions {
  // Per-fiber Monte Carlo budget when no fiber volume is known in closed form.
  int fiber_samples = 4096;
  // Fiber cache pitch is R / grid.
  int grid = 512;
  std::uint64_t seed = 1;
};

// Each chord parallel to the normal is moved to be centered on H.
ConvexBody steiner(const ConvexBody& k, const RealHyperplane& h);

// Each fiber y + nu F is replaced by the centered p-ball of equal volume.
// F-ellipsoids map to F-ellipsoids in closed form.
ConvexBody symmetrize_fhyperplane(const ConvexBody& k, const FHyperplane& h, const SymmetrizeOptions& opt = {});

struct IterateTrace {
  // defects[0] is the input; defects[i] follows round i.
  std::vector<double> defects;
  std::vector<Estimate> volumes;
  ConvexBody result;
};

// One round applies every plane once, in order.
IterateTrace iterate(const ConvexBody& k, const std::vector<FHyperplane>& planes, int rounds, int n_dirs,
                     std::uint64_t seed, std::uint64_t volume_samples = 200000, const SymmetrizeOptions& opt = {});

}  // namespace bcg
