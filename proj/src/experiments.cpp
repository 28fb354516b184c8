#include "bcg/experiments.hpp"

#include <cmath>
#include <numbers>

namespace bcg {

namespace {

constexpr int kScanAngles = 12;

struct Run {
  Estimate b;
  double delta;
  double sigmas;
};

Run steiner_run(const ConvexBody& e, const Vec& u, double r, double exact, const FunctionalOptions& opt) {
  const ConvexBody s = steiner(e, RealHyperplane::from_normal(u));
  Run run{B_functional({s, s}, Weight::power(r), opt), 0.0, 0.0};
  run.delta = run.b.mean - exact;
  run.sigmas = run.b.std_error > 0.0 ? run.delta / run.b.std_error : 0.0;
  return run;
}

}  // namespace

ConvexBody aspect_ellipsoid(double a) {
  if (!(a > 0.0)) throw InvalidArgument("aspect must be positive");
  return make_ellipsoid(FVector(Field::Complex, 2),
                        FMat::diagonal({Scalar(Field::Complex, 1.0 / (a * a)), Scalar(Field::Complex, a * a)}));
}

CounterexampleReport counterexample(double a, double r, const FunctionalOptions& opt) {
  const ConvexBody e = aspect_ellipsoid(a);
  CounterexampleReport rep;
  rep.a = a;
  rep.r = r;
  rep.exact = B_balls_exact(2, 2, r);

  Vec u(4);
  u << 1.0, 0.0, 1.0, 0.0;
  Run best = steiner_run(e, u, r, rep.exact, opt);
  rep.normal = u.normalized();
  if (best.sigmas < 3.0) {
    rep.scanned = true;
    FunctionalOptions so = opt;
    so.samples = std::max<std::uint64_t>(1000, opt.samples / kScanAngles);
    for (int i = 1; i < kScanAngles; ++i) {
      const double t = 0.5 * std::numbers::pi * i / kScanAngles;
      Vec v(4);
      v << std::cos(t), 0.0, std::sin(t), 0.0;
      so.seed = derive_seed(opt.seed, 100 + static_cast<std::uint64_t>(i));
      const Run run = steiner_run(e, v, r, rep.exact, so);
      if (run.sigmas > best.sigmas) {
        best = run;
        rep.normal = v;
      }
    }
  }
  rep.steiner = best.b;
  rep.delta = best.delta;
  rep.delta_sigmas = best.sigmas;

  FVector nu(Field::Complex, 2);
  nu[0] = Scalar::one(Field::Complex);
  const ConvexBody c = symmetrize_fhyperplane(e, FHyperplane::from_normal(nu));
  FunctionalOptions co = opt;
  co.seed = derive_seed(opt.seed, 0x636f6e74);
  rep.control = B_functional({c, c}, Weight::power(r), co);
  rep.control_delta = rep.control.mean - rep.exact;
  rep.control_sigmas = rep.control.std_error > 0.0 ? rep.control_delta / rep.control.std_error : 0.0;
  return rep;
}

}  // namespace bcg
