#include <cmath>
#include <numbers>

#include "bcg/ball_constants.hpp"
#include "bcg/quermass.hpp"
#include "bcg/randgeom.hpp"
#include "doctest.h"

using namespace bcg;

namespace {

constexpr double kPi = std::numbers::pi;
const Field R = Field::Real, C = Field::Complex, H = Field::Quaternion;

QuermassOptions opts(std::uint64_t outer, std::uint64_t inner, std::uint64_t seed) {
  QuermassOptions o;
  o.outer = outer;
  o.inner = inner;
  o.seed = seed;
  o.volume_samples = 400000;
  return o;
}

bool within(const Estimate& e, double want, double k = 3.0) {
  return std::abs(e.mean - want) <= k * e.std_error + 1e-9 * std::abs(want);
}

ConvexBody ball_oracle(Field f, int n, const Vec& c, double r) {
  return make_oracle(f, n, [c, r](std::span<const double> x) {
    return (Eigen::Map<const Vec>(x.data(), c.size()) - c).squaredNorm() <= r * r;
  }, c, r);
}

// I + G / 2 normalized to |det| = 1; keeps the conditioning moderate.
FMat unimodular(Field f, int n, Rng& rng) {
  FMat g = scale(random_gaussian(f, n, n, rng), 0.5) + FMat::identity(f, n);
  const double d = det_abs(g).value;
  return scale(g, std::pow(d, -1.0 / n));
}

}  // namespace

TEST_CASE("section volume estimator is unbiased") {
  // Off-center ellipsoid wrapped as an oracle, so the radial path is used.
  Mat q(4, 4);
  q << 2.0, 0.3, 0.0, 0.1, 0.3, 1.0, 0.2, 0.0, 0.0, 0.2, 0.8, 0.1, 0.1, 0.0, 0.1, 1.5;
  Vec c(4);
  c << 0.1, -0.2, 0.15, 0.05;
  const ConvexBody e = make_real_ellipsoid(C, 2, c, q);
  const ConvexBody o = make_oracle(C, 2, [&](std::span<const double> x) { return e.contains(x); }, c, 1.5);
  Rng rng(5);
  const Subspace sub = sample_grassmann(2, 1, C, rng);
  const double exact = *section(e, sub, Vec::Zero(4)).exact_volume();
  Rng r1(6);
  REQUIRE(section_volume(e, sub, 100, r1).is_exact());
  // Mean of the n-fold product against exact^n.
  Accumulator acc;
  for (int t = 0; t < 2000; ++t) acc.add(section_volume(o, sub, 64, r1).mean * section_volume(o, sub, 64, r1).mean);
  const Estimate prod = to_estimate(acc, 6);
  CHECK(within(prod, exact * exact));

  // Hit-or-miss path for a section missing the origin.
  Vec c2(4);
  c2 << 0.0, 0.0, 2.0, 0.0;
  const ConvexBody far = make_ball(C, 2, c2, 2.5);
  const ConvexBody far_o = ball_oracle(C, 2, c2, 2.5);
  Vec off(4);
  off << 0.0, 0.0, 3.0, 0.0;
  const ConvexBody shifted = ball_oracle(C, 2, off, 1.0);
  Accumulator hm;
  for (int t = 0; t < 200; ++t) hm.add(section_volume(far_o, sub, 2000, r1).mean);
  const double want = *section(far, sub, Vec::Zero(4)).exact_volume();
  CHECK(within(to_estimate(hm, 1), want));
  CHECK(section_volume(shifted, sub, 200, r1).mean >= 0.0);
}

TEST_CASE("dual affine quermassintegral of balls") {
  struct Case {
    int n, m;
    Field f;
  };
  for (const Case c : {Case{2, 1, R}, Case{2, 1, C}, Case{2, 1, H}, Case{3, 2, R}}) {
    const int p = real_dim(c.f);
    const ConvexBody b = ball_oracle(c.f, c.n, Vec::Zero(c.n * p), 1.0);
    const Estimate v = dual_affine_quermass(b, c.m, opts(2000, 64, 11));
    INFO(field_tag(c.f), " n=", c.n, " m=", c.m, " mean=", v.mean, " se=", v.std_error);
    CHECK(within(v, std::pow(kappa(c.m * p), c.n)));
  }
  const Estimate exact = dual_affine_quermass(make_unit_ball(C, 2), 1, opts(100, 64, 12));
  CHECK(exact.mean == doctest::Approx(kPi * kPi).epsilon(1e-12));
}

TEST_CASE("dual affine quermassintegral of a shifted ball and scaling") {
  Vec c(4);
  c << 0.5, 0.0, 0.0, 0.0;
  const ConvexBody shifted = make_ball(C, 2, c, 1.0);
  const Estimate s = dual_affine_quermass(shifted, 1, opts(20000, 64, 21));
  CHECK(kPi * kPi - s.mean > 3.0 * s.std_error);

  Vec lo(4), hi(4);
  lo << -1, -0.5, -0.7, -1.2;
  hi << 0.6, 0.5, 1.1, 0.4;
  const Estimate a = dual_affine_quermass(make_box(C, 2, lo, hi), 1, opts(4000, 64, 22));
  const Estimate b = dual_affine_quermass(make_box(C, 2, 1.5 * lo, 1.5 * hi), 1, opts(4000, 64, 23));
  const double f = std::pow(1.5, 2 * 2);
  CHECK(std::abs(b.mean - f * a.mean) <= 3.0 * std::hypot(b.std_error, f * a.std_error));
  CHECK_THROWS_AS(dual_affine_quermass(make_ball(C, 2, Vec::Constant(4, 3.0), 1.0), 1, opts(10, 10, 1)),
                  OriginNotInterior);
}

TEST_CASE("affine quermassintegral") {
  const Estimate b = affine_quermass(make_unit_ball(C, 2), 1, opts(1000, 1, 31));
  CHECK(b.mean == doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-12));
  const Estimate b3 = affine_quermass(make_unit_ball(H, 3), 2, opts(1000, 1, 32));
  CHECK(b3.mean == doctest::Approx(std::pow(kappa(8), -3)).epsilon(1e-12));

  Rng rng(33);
  const FMat g = unimodular(C, 2, rng);
  const Estimate e = affine_quermass(affine_image(make_unit_ball(C, 2), g), 1, opts(200000, 1, 34));
  CHECK(within(e, 1.0 / (kPi * kPi)));

  // The l1 ball goes through the support function path.
  const Estimate l1 = affine_quermass(make_l1_ball(C, 2, 1.0), 1, opts(100000, 1, 35));
  CHECK(l1.mean > 0.0);
  CHECK_THROWS_AS(affine_quermass(make_box(C, 2, Vec::Constant(4, -1), Vec::Constant(4, 1)), 1, opts(10, 1, 1)),
                  UnsupportedBodyForProjection);
  CHECK_THROWS_AS(affine_quermass(make_l1_ball(C, 3, 1.0), 2, opts(10, 1, 1)), UnsupportedBodyForProjection);
}

TEST_CASE("SL invariance") {
  Rng rng(41);
  FMat u = *orthonormalize(random_gaussian(C, 2, 2, rng));
  Vec lo(4), hi(4);
  lo << -1, -0.5, -0.7, -1.2;
  hi << 0.6, 0.5, 1.1, 0.4;
  const ConvexBody box = make_box(C, 2, lo, hi);
  CHECK(std::abs(sl_invariance_test(box, 1, u, true, opts(4000, 64, 42)).margin_sigmas) <= 3.0);

  const FMat d = FMat::diagonal({Scalar(C, 2.0), Scalar(C, 0.5)});
  const Comparison cd = sl_invariance_test(make_unit_ball(C, 2), 1, d, true, opts(20000, 64, 43));
  INFO("ball diag: ", cd.lhs.mean, " ", cd.rhs.mean, " ", cd.sigma);
  CHECK(std::abs(cd.margin_sigmas) <= 3.0);

  FMat shear = FMat::identity(H, 2);
  shear(0, 1) = Scalar(H, 0.4, -0.3, 0.2, 0.5);
  const ConvexBody hbox = make_box(H, 2, Vec::Constant(8, -1.0), Vec::Constant(8, 1.0));
  const Comparison ch = sl_invariance_test(hbox, 1, shear, true, opts(3000, 64, 44));
  INFO("quaternion shear: ", ch.lhs.mean, " ", ch.rhs.mean, " ", ch.sigma);
  CHECK(std::abs(ch.margin_sigmas) <= 3.0);

  for (Field f : {R, C, H}) {
    for (int t = 0; t < 10; ++t) {
      const FMat g = unimodular(f, 2, rng);
      FMat a = random_gaussian(f, 2, 2, rng);
      a = scale(a, 0.5) + FMat::identity(f, 2);
      const ConvexBody e = affine_image(make_unit_ball(f, 2), a);
      const Comparison c = sl_invariance_test(e, 1, g, false, opts(20000, 1, 50 + t));
      CHECK(std::abs(c.margin_sigmas) <= 3.0);
    }
  }
  CHECK_THROWS_AS(sl_invariance_test(box, 1, d + d, true, opts(10, 10, 1)), NotUnimodular);
}

TEST_CASE("intersection inequality") {
  const Comparison balls = intersection_inequality_check({make_unit_ball(C, 3)}, opts(200, 64, 61));
  CHECK(std::abs(balls.difference) <= 1e-9 * balls.lhs.mean);
  const Comparison obs = intersection_inequality_check({ball_oracle(C, 2, Vec::Zero(4), 1.0)}, opts(300, 64, 62));
  CHECK(std::abs(obs.difference) <= 1e-6 * obs.lhs.mean + 3.0 * obs.sigma);

  const ConvexBody cube = make_box(C, 2, Vec::Constant(4, -1), Vec::Constant(4, 1));
  const Comparison cc = intersection_inequality_check({cube}, opts(20000, 256, 63));
  INFO("cube margin ", cc.margin_sigmas, " lhs ", cc.lhs.mean, " rhs ", cc.rhs.mean);
  CHECK(cc.margin_sigmas > 3.0);

  Mat q = Mat::Identity(3, 3);
  q(0, 0) = 2.0;
  q(1, 2) = q(2, 1) = 0.3;
  Vec c(3);
  c << 0.3, -0.2, 0.1;
  const ConvexBody e = make_real_ellipsoid(R, 3, c, q);
  const Comparison ce = intersection_inequality_check({e, e}, opts(20000, 64, 64));
  INFO("shifted ellipsoid margin ", ce.margin_sigmas);
  CHECK(ce.margin_sigmas > 3.0);

  // Fractional exponent n / m = 3 / 2 on a centered ellipsoid: equality.
  const ConvexBody ec = make_real_ellipsoid(R, 3, Vec::Zero(3), q);
  const ConvexBody eo = make_oracle(R, 3, [&](std::span<const double> x) { return ec.contains(x); }, Vec::Zero(3), 1.5);
  const Comparison cf = intersection_inequality_check({eo, eo}, opts(60, 0, 65));
  INFO("fractional ", cf.lhs.mean, " ", cf.rhs.mean, " ", cf.sigma);
  CHECK(std::abs(cf.margin_sigmas) <= 3.0);
}

TEST_CASE("intersection inequality on random bodies") {
  Rng rng(71);
  for (Field f : {R, C, H}) {
    const int p = real_dim(f);
    const int n = 2, d = n * p;
    int worst_ok = 0;
    for (int t = 0; t < 20; ++t) {
      ConvexBody k;
      if (t % 2 == 0) {
        Vec lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
          lo[j] = -0.3 - uniform01(rng);
          hi[j] = 0.3 + uniform01(rng);
        }
        k = make_box(f, n, lo, hi);
      } else {
        FMat a = scale(random_gaussian(f, n, n, rng), 0.4) + FMat::identity(f, n);
        FVector b(f, n);
        for (int j = 0; j < n; ++j) b[j] = Scalar(f, 0.1 * standard_normal(rng));
        k = affine_image(make_unit_ball(f, n), a, b);
        if (!k.contains(Vec::Zero(d))) continue;
      }
      const Comparison c = intersection_inequality_check({k}, opts(500, 64, 80 + t));
      if (c.margin_sigmas >= -3.0) ++worst_ok;
      else INFO("failed: ", field_tag(f), " t=", t, " margin=", c.margin_sigmas);
      CHECK(c.margin_sigmas >= -3.0);
    }
    (void)worst_ok;
  }
}

TEST_CASE("santalo case") {
  const SantaloReport b = santalo_case(make_unit_ball(C, 2), opts(100000, 1, 91));
  CHECK(std::abs(b.identity.margin_sigmas) <= 3.0);
  CHECK(std::abs(b.inequality.margin_sigmas) <= 3.0);

  const ConvexBody e = make_ellipsoid(FVector(C, 2), FMat::diagonal({Scalar(C, 4.0), Scalar(C, 0.25)}));
  const SantaloReport se = santalo_case(e, opts(400000, 1, 92));
  CHECK(std::abs(se.identity.margin_sigmas) <= 3.0);
  CHECK(std::abs(se.inequality.margin_sigmas) <= 3.0);

  const SantaloReport l1 = santalo_case(make_l1_ball(C, 2, 1.0), opts(1000000, 1, 93));
  INFO("l1: ", l1.inequality.lhs.mean, " ", l1.inequality.rhs.mean, " margin ", l1.inequality.margin_sigmas);
  CHECK(std::abs(l1.identity.margin_sigmas) <= 3.0);
  CHECK(l1.inequality.margin_sigmas > 3.0);
  CHECK(l1.volume == doctest::Approx(kPi * kPi / 6).epsilon(1e-12));
  CHECK(std::abs(l1.polar_volume - kPi * kPi) <= 0.01 * kPi * kPi);

  CHECK_THROWS_AS(santalo_case(make_box(C, 2, Vec::Constant(4, -1), Vec::Constant(4, 1)), opts(10, 1, 1)),
                  NotUnitScalarInvariant);
}

TEST_CASE("conjecture evaluation") {
  const ConjectureReport b = conjecture_eval(make_unit_ball(C, 3), 1, opts(1000, 1, 101));
  CHECK(std::abs(b.conj.difference) <= 1e-9 * b.conj.lhs.mean);
  CHECK(std::abs(b.iso.difference) <= 1e-9 * b.iso.lhs.mean);

  Rng rng(102);
  const FMat g = unimodular(C, 3, rng);
  const ConjectureReport e = conjecture_eval(affine_image(make_unit_ball(C, 3), g), 2, opts(200000, 1, 103));
  CHECK(std::abs(e.conj.margin_sigmas) <= 3.0);

  // Scaling by t: conj sides both scale by t^{-m n p}.
  const double t = 1.7;
  const FMat a = scale(unimodular(C, 3, rng), t);
  const ConvexBody k = affine_image(make_unit_ball(C, 3), a);
  const ConjectureReport s = conjecture_eval(k, 1, opts(200000, 1, 104));
  const double f = std::pow(t, -1 * 3 * 2);
  const double ratio = s.conj.rhs.mean / s.conj.lhs.mean;
  CHECK(std::abs(ratio - e.conj.rhs.mean / e.conj.lhs.mean) <= 3.0 * std::hypot(s.conj.rhs.relative_stderr(),
                                                                                e.conj.rhs.relative_stderr()));
  CHECK(s.conj.lhs.mean == doctest::Approx(f * std::pow(kappa(6), -1)).epsilon(1e-9));
}
