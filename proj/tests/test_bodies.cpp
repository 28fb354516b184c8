#include <algorithm>
#include <cmath>
#include <numbers>

#include "bcg/ball_constants.hpp"
#include "bcg/bodies.hpp"
#include "doctest.h"

using namespace bcg;

namespace {

constexpr double kPi = std::numbers::pi;
const Field R = Field::Real, C = Field::Complex, H = Field::Quaternion;

Vec sample_ball_point(Rng& rng, int d, double radius) {
  Vec x(d);
  uniform_in_ball(rng, std::span<double>(x.data(), static_cast<std::size_t>(d)));
  return radius * x;
}

FMat complex_diag(double a, double b) { return FMat::diagonal({Scalar(C, a), Scalar(C, b)}); }

// Kolmogorov-Smirnov statistic of samples against U(lo, hi).
double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - lo) / (hi - lo);
    d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  return d;
}

std::vector<Vec> cube_vertices(int d) {
  std::vector<Vec> v;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    v.push_back(x);
  }
  return v;
}

std::vector<ConvexBody> one_of_each_kind() {
  Rng rng(99);
  std::vector<Vec> pts;
  for (int i = 0; i < 9; ++i) pts.push_back(sample_ball_point(rng, 4, 1.0));
  const FMat g = random_gaussian(C, 2, 2, rng);
  return {make_unit_ball(C, 2),
          make_ellipsoid(FVector(C, 2), complex_diag(0.25, 2.0)),
          make_box(C, 2, Vec::Constant(4, -1.0), Vec::Constant(4, 1.0)),
          make_vpolytope(C, 2, pts),
          make_l1_ball(C, 2, 1.0),
          affine_image(make_box(C, 2, Vec::Constant(4, -1.0), Vec::Constant(4, 1.0)), g),
          make_oracle(C, 2, [](std::span<const double> x) { return std::abs(x[0]) + x[1] * x[1] + x[2] * x[2] + std::abs(x[3]) <= 1.0; },
                      Vec::Zero(4), 1.0)};
}

}  // namespace

TEST_CASE("ball constants") {
  CHECK(kappa(0) == doctest::Approx(1.0));
  CHECK(kappa(2) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(kappa(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));
  CHECK(omega(4) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
  CHECK(kappa(8) == doctest::Approx(std::pow(kPi, 4) / 24.0).epsilon(1e-13));
  for (int d = 1; d < 20; ++d) CHECK(BallConstants::omega(d) == doctest::Approx(d * BallConstants::kappa(d)).epsilon(1e-13));
}

TEST_CASE("ellipsoid constructors") {
  Rng rng(1);
  const ConvexBody ball = make_unit_ball(C, 2);
  const ConvexBody e = make_ellipsoid(FVector(C, 2), FMat::identity(C, 2));
  for (int i = 0; i < 10000; ++i) {
    const Vec x = sample_ball_point(rng, 4, 1.5);
    REQUIRE(ball.contains(x) == e.contains(x));
  }
  const ConvexBody doubled = affine_image(make_unit_ball(R, 3), FMat::diagonal({Scalar(R, 2.0), Scalar(R, 2.0), Scalar(R, 2.0)}));
  REQUIRE(doubled.ellipsoid() != nullptr);
  CHECK((doubled.ellipsoid()->Q - Mat::Identity(3, 3) / 4.0).norm() < 1e-14);
  const ConvexBody disk = make_ellipsoid(FVector(C, 1), FMat::diagonal({Scalar(C, 0.25)}));
  CHECK(*disk.exact_volume() == doctest::Approx(4.0 * kPi));
  CHECK(disk.ellipsoid()->H.has_value());

  CHECK_THROWS_AS(make_ellipsoid(FVector(C, 2), complex_diag(1.0, -1.0)), NotPositiveDefinite);
  FMat nh = FMat::identity(C, 2);
  nh(0, 1) = Scalar(C, 0.0, 0.5);
  CHECK_THROWS_AS(make_ellipsoid(FVector(C, 2), nh), NotPositiveDefinite);
  CHECK_THROWS_AS(affine_image(ball, FMat(C, 2, 2)), SingularTransform);
}

TEST_CASE("affine image of a complex ellipsoid keeps the hermitian form") {
  Rng rng(2);
  const FMat a = random_gaussian(C, 2, 2, rng);
  FVector b(C, 2);
  b[0] = Scalar(C, 0.3, -0.2);
  const ConvexBody img = affine_image(make_unit_ball(C, 2), a, b);
  REQUIRE(img.ellipsoid() != nullptr);
  REQUIRE(img.ellipsoid()->H.has_value());
  CHECK((real_operator(*img.ellipsoid()->H) - img.ellipsoid()->Q).norm() < 1e-9);
  CHECK(*img.exact_volume() == doctest::Approx(std::pow(det_abs(a).value, 2) * kPi * kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("membership") {
  const ConvexBody ball = make_ball(R, 3, Vec::Constant(3, 0.5), 2.0);
  CHECK(ball.contains(Vec(Vec::Constant(3, 0.5))));
  Vec far = Vec::Zero(3);
  far[0] = 2.0 * ball.bounding_radius();
  CHECK_FALSE(ball.contains(far));
  CHECK_THROWS_AS(ball.contains(Vec(Vec::Zero(4))), DimensionMismatch);

  const ConvexBody e = make_ellipsoid(FVector(C, 2), complex_diag(1.0 / 9.0, 4.0));
  Vec bnd = Vec::Zero(4);
  bnd[1] = 3.0;
  CHECK(e.contains(Vec(0.999 * bnd)));
  CHECK_FALSE(e.contains(Vec(1.001 * bnd)));
}

TEST_CASE("volumes") {
  CHECK(*make_unit_ball(R, 3).exact_volume() == doctest::Approx(4.0 * kPi / 3.0));
  const double a = 1.7, b = 0.6;
  const ConvexBody e = make_ellipsoid(FVector(C, 2), complex_diag(1.0 / (a * a), 1.0 / (b * b)));
  CHECK(*e.exact_volume() == doctest::Approx(kPi * kPi / 2.0 * a * a * b * b).epsilon(1e-12));

  const ConvexBody oracle = make_oracle(R, 4, [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s <= 1.0;
  }, Vec::Zero(4), 1.0);
  const Estimate v = oracle.volume(1000000, 5);
  CHECK(std::abs(v.mean - kPi * kPi / 2.0) <= 3.0 * v.std_error);
  CHECK_FALSE(v.insufficient);
  CHECK(v.n_samples == 1000000);
}

TEST_CASE("sections") {
  Rng rng(3);
  for (Field f : {R, C, H}) {
    const ConvexBody ball = make_unit_ball(f, 3);
    const Subspace line = Subspace::span_of(random_gaussian(f, 3, 1, rng));
    const ConvexBody s = section(ball, line, Vec::Zero(ball.dim()));
    CHECK(s.dim() == real_dim(f));
    CHECK(*s.exact_volume() == doctest::Approx(kappa(real_dim(f))).epsilon(1e-12));
  }
  const ConvexBody e = make_ellipsoid(FVector(C, 2), complex_diag(0.3, 2.5));
  for (int t = 0; t < 10; ++t) {
    const Subspace line = Subspace::span_of(random_gaussian(C, 2, 1, rng));
    Vec y = 0.3 * sample_ball_point(rng, 4, 1.0);
    y -= line.projector() * y;
    const ConvexBody analytic = section(e, line, y);
    REQUIRE(analytic.kind() == BodyKind::Ellipsoid);
    const ConvexBody oracle_e = make_oracle(C, 2, [&](std::span<const double> x) { return e.contains(x); }, Vec::Zero(4), 2.0);
    const ConvexBody generic = section(oracle_e, line, y);
    CHECK(generic.kind() == BodyKind::Section);
    for (int i = 0; i < 1000; ++i) {
      const Vec w = sample_ball_point(rng, 2, 2.0);
      REQUIRE(analytic.contains(w) == generic.contains(w));
    }
  }
  const Subspace line = Subspace::span_of(random_gaussian(C, 2, 1, rng));
  Vec y = Vec::Zero(4);
  y[0] = 5.0;
  y -= line.projector() * y;
  CHECK(*section(make_unit_ball(C, 2), line, y).exact_volume() == 0.0);
}

TEST_CASE("support and radial functions") {
  Rng rng(4);
  const ConvexBody ball = make_unit_ball(C, 2);
  for (int i = 0; i < 20; ++i) {
    Vec u(4);
    uniform_direction(rng, std::span<double>(u.data(), 4));
    CHECK(support(ball, u) == doctest::Approx(1.0));
    CHECK(radial(ball, u) == doctest::Approx(1.0));
    CHECK(polar_radial(ball, u) == doctest::Approx(1.0));
  }
  const ConvexBody cube = make_vpolytope(R, 4, cube_vertices(4));
  Vec e1 = Vec::Zero(4);
  e1[0] = 1.0;
  CHECK(support(cube, e1) == doctest::Approx(1.0));
  CHECK(*cube.exact_volume() == doctest::Approx(16.0));
  const ConvexBody ell = make_real_ellipsoid(R, 2, Vec::Zero(2), Eigen::Vector2d(0.25, 1.0).asDiagonal());
  CHECK(support(ell, Vec(Eigen::Vector2d(1.0, 0.0))) == doctest::Approx(2.0));

  const ConvexBody shifted = make_ball(R, 2, Vec(Eigen::Vector2d(3.0, 0.0)), 1.0);
  CHECK_THROWS_AS(radial(shifted, Vec(Eigen::Vector2d(1.0, 0.0))), OriginNotInterior);

  // Fallback support on an oracle cube matches the analytic value closely.
  const ConvexBody oracle_cube = make_oracle(R, 3, [](std::span<const double> x) {
    return std::abs(x[0]) <= 1.0 && std::abs(x[1]) <= 1.0 && std::abs(x[2]) <= 1.0;
  }, Vec::Zero(3), 2.0);
  CHECK_FALSE(has_analytic_support(oracle_cube));
  const Vec u = Eigen::Vector3d(1.0, 2.0, -0.5).normalized();
  CHECK(support(oracle_cube, u) == doctest::Approx(u.cwiseAbs().sum()).epsilon(2e-2));
  CHECK(radial(oracle_cube, Vec(Eigen::Vector3d(1.0, 0.0, 0.0))) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("polar volume of the unit ball") {
  const Estimate v = polar_volume(make_unit_ball(C, 2), 10000, 3);
  CHECK(std::abs(v.mean - kPi * kPi / 2.0) <= 3.0 * v.std_error + 1e-12);
}

TEST_CASE("unit scalar invariance") {
  CHECK(unit_scalar_invariance_check(make_ball(C, 2, Vec::Zero(4), 1.3), 1000, 1));
  CHECK(unit_scalar_invariance_check(make_ellipsoid(FVector(C, 2), complex_diag(0.2, 3.0)), 1000, 1));
  CHECK(unit_scalar_invariance_check(make_l1_ball(H, 2, 1.0), 1000, 1));
  CHECK_FALSE(unit_scalar_invariance_check(make_box(C, 2, Vec::Constant(4, -1.0), Vec::Constant(4, 1.0)), 1000, 1));
  // Explicit witness: the corner (1 + i, 0) rotated by e^{i pi/4}.
  const ConvexBody cube = make_box(C, 2, Vec::Constant(4, -1.0), Vec::Constant(4, 1.0));
  Vec corner = Vec::Zero(4);
  corner[0] = corner[1] = 1.0;
  right_scale(C, std::span<double>(corner.data(), 4), Scalar(C, std::cos(kPi / 4), std::sin(kPi / 4)));
  CHECK_FALSE(cube.contains(corner));
}

TEST_CASE("roundness") {
  CHECK(roundness_defect(make_unit_ball(C, 2), 10000, 1) <= 2e-3);
  const ConvexBody e = make_ellipsoid(FVector(C, 2), complex_diag(0.25, 3.0));
  CHECK(roundness_defect(e, 1000, 1) > 0.5);
  const LineSectionReport good = line_section_roundness(e, 100, 7);
  CHECK(good.sections > 90);
  CHECK(good.max_defect <= 5e-3);
  const LineSectionReport cube =
      line_section_roundness(make_box(C, 2, Vec::Constant(4, -1.0), Vec::Constant(4, 1.0)), 20, 7);
  CHECK(cube.max_defect > 0.1);
  // The square {|Re z1|, |Im z1| <= 1} cut by z2 = 0.
  FMat b(C, 2, 1);
  b(0, 0) = Scalar::one(C);
  const ConvexBody square = section(make_box(C, 2, Vec::Constant(4, -1.0), Vec::Constant(4, 1.0)),
                                    Subspace::from_basis(b), Vec::Zero(4));
  CHECK(roundness_defect(square, 2000, 3) > 0.3);
}

TEST_CASE("uniform sampling") {
  Rng rng(8);
  const ConvexBody ball = make_ball(R, 3, Vec::Zero(3), 2.0);
  Vec mean = Vec::Zero(3);
  for (int i = 0; i < 100000; ++i) mean += sample_uniform(ball, rng);
  mean /= 100000.0;
  CHECK(mean.norm() <= 4.0 / std::sqrt(1e5) * 2.0);

  const ConvexBody box = make_box(R, 2, Vec(Eigen::Vector2d(-1.0, 2.0)), Vec(Eigen::Vector2d(3.0, 2.5)));
  std::vector<double> xs, ys;
  for (int i = 0; i < 20000; ++i) {
    const Vec x = sample_uniform(box, rng);
    xs.push_back(x[0]);
    ys.push_back(x[1]);
  }
  const double crit = 1.628 / std::sqrt(20000.0);
  CHECK(ks_uniform(xs, -1.0, 3.0) < crit);
  CHECK(ks_uniform(ys, 2.0, 2.5) < crit);

  // Push-forward and rejection samplers as mutual oracles.
  const ConvexBody e = affine_image(make_unit_ball(C, 2), random_gaussian(C, 2, 2, rng));
  const int n = 40000;
  Mat a(n, 4), b(n, 4);
  for (int i = 0; i < n; ++i) {
    a.row(i) = sample_uniform(e, rng).transpose();
    b.row(i) = sample_by_rejection(e, rng).transpose();
  }
  const Vec ma = a.colwise().mean(), mb = b.colwise().mean();
  const Mat ca = (a.rowwise() - ma.transpose()).transpose() * (a.rowwise() - ma.transpose()) / (n - 1);
  const Mat cb = (b.rowwise() - mb.transpose()).transpose() * (b.rowwise() - mb.transpose()) / (n - 1);
  for (int j = 0; j < 4; ++j) {
    const double se = std::sqrt((ca(j, j) + cb(j, j)) / n);
    CHECK(std::abs(ma[j] - mb[j]) <= 3.0 * se);
    for (int k = 0; k <= j; ++k) {
      const double sc = std::sqrt(2.0 * (ca(j, j) * ca(k, k) + cb(j, j) * cb(k, k)) / n);
      CHECK(std::abs(ca(j, k) - cb(j, k)) <= 3.0 * sc);
    }
  }
}

TEST_CASE("convexity spot check on every kind") {
  Rng rng(10);
  for (const ConvexBody& k : one_of_each_kind()) {
    INFO(kind_name(k.kind()));
    for (int i = 0; i < 1000; ++i) {
      const Vec x = sample_uniform(k, rng), y = sample_uniform(k, rng);
      REQUIRE(k.contains(x));
      REQUIRE(k.contains(Vec(0.5 * (x + y))));
    }
  }
}

TEST_CASE("affine images scale volume by det_abs^p") {
  Rng rng(12);
  for (Field f : {R, C, H}) {
    const int n = f == H ? 1 : 2;
    const int d = n * real_dim(f);
    const ConvexBody box = make_oracle(f, n, [](std::span<const double> x) {
      for (double v : x) if (std::abs(v) > 1.0) return false;
      return true;
    }, Vec::Zero(d), std::sqrt(static_cast<double>(d)));
    const FMat a = random_gaussian(f, n, n, rng);
    const ConvexBody img = affine_image(box, a);
    const Estimate v = img.volume(400000, 3);
    const double expect = std::pow(det_abs(a).value, real_dim(f)) * std::pow(2.0, d);
    CHECK(std::abs(v.mean - expect) <= 3.0 * v.std_error);
  }
}

TEST_CASE("vpolytope") {
  Rng rng(14);
  std::vector<Vec> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(sample_ball_point(rng, 4, 1.0));
  const ConvexBody p = make_vpolytope(C, 2, pts);
  const ConvexBody oracle = make_oracle(C, 2, [&](std::span<const double> x) { return p.contains(x); }, Vec::Zero(4), 1.0);
  const Estimate mc = oracle.volume(1000000, 1);
  CHECK(std::abs(*p.exact_volume() - mc.mean) <= 3.0 * mc.std_error);
  for (const auto& v : pts) CHECK(p.contains(v));
  CHECK_THROWS_AS(make_vpolytope(R, 2, {Vec(Eigen::Vector2d(0, 0)), Vec(Eigen::Vector2d(1, 1)), Vec(Eigen::Vector2d(2, 2))}),
                  InvalidArgument);
  // Non-simplicial: the 4-cube triangulates into cones over its facets.
  const ConvexBody cube = make_vpolytope(C, 2, cube_vertices(4));
  Vec c = centroid(cube);
  CHECK(c.norm() < 1e-12);
  const ConvexBody moved = affine_image(cube, FMat::identity(C, 2), FVector::from_real(C, std::vector<double>{1, 0, 0, 0}));
  CHECK(moved.kind() == BodyKind::VPolytope);
  CHECK(*moved.exact_volume() == doctest::Approx(16.0));
}

TEST_CASE("l1 ball") {
  const ConvexBody k = make_l1_ball(C, 2, 1.0);
  CHECK(*k.exact_volume() == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-12));
  const ConvexBody oracle = make_oracle(C, 2, [&](std::span<const double> x) { return k.contains(x); }, Vec::Zero(4), 1.0);
  const Estimate mc = oracle.volume(1000000, 2);
  CHECK(std::abs(*k.exact_volume() - mc.mean) <= 3.0 * mc.std_error);
  const Estimate pv = polar_volume(k, 100000, 4);
  CHECK(std::abs(pv.mean - kPi * kPi) <= 3.0 * pv.std_error);
  Rng rng(3);
  Vec mean = Vec::Zero(4);
  for (int i = 0; i < 50000; ++i) mean += sample_uniform(k, rng);
  CHECK((mean / 50000.0).norm() < 0.02);
  CHECK(*make_l1_ball(R, 3, 1.0).exact_volume() == doctest::Approx(8.0 / 6.0));
}
