#include <Eigen/Dense>
#include <cmath>

#include "bcg/montecarlo.hpp"
#include "bcg/ncla.hpp"
#include "bcg/ncla_suite.hpp"
#include "doctest.h"

using namespace bcg;

namespace {

const Field kFields[] = {Field::Real, Field::Complex, Field::Quaternion};
const Field H = Field::Quaternion;

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

bool mat_close(const FMat& a, const FMat& b, double tol = 1e-10) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!approx_equal(a(i, j), b(i, j), tol, tol)) return false;
  return true;
}

}  // namespace

TEST_CASE("matmul and adjoint basics") {
  Rng rng(1);
  for (Field f : kFields) {
    const FMat a = random_gaussian(f, 3, 3, rng);
    CHECK(mat_close(FMat::identity(f, 3) * a, a));
    CHECK(mat_close(adjoint(adjoint(a)), a));
  }
  const FMat i = FMat::from_rows(H, {{Scalar::unit(H, 1)}});
  const FMat j = FMat::from_rows(H, {{Scalar::unit(H, 2)}});
  CHECK(approx_equal((i * j)(0, 0), Scalar::unit(H, 3)));
  CHECK_THROWS_AS(matmul(FMat(H, 2, 3), FMat(H, 2, 3)), DimensionMismatch);
}

TEST_CASE("det_abs anchors") {
  for (Field f : kFields) CHECK(det_abs(FMat::identity(f, 4)).value == doctest::Approx(1.0));
  const Field C = Field::Complex;
  const FMat d = FMat::diagonal({Scalar(C, 2.0), Scalar(C, 0.0, -3.0), Scalar(C, 1.0, 1.0)});
  CHECK(det_abs(d).value == doctest::Approx(2.0 * 3.0 * std::sqrt(2.0)));

  const FMat a = FMat::from_rows(H, {{Scalar::one(H), Scalar::unit(H, 1)}, {Scalar::unit(H, 2), Scalar::unit(H, 3)}});
  CHECK(det_abs(a).value == doctest::Approx(2.0).epsilon(1e-12));
  // Hermitian Gram oracle: det_abs(A* A) = |det A|^2.
  CHECK(det_abs(adjoint(a) * a).value == doctest::Approx(4.0).epsilon(1e-12));

  FMat s(H, 2, 2);
  s(0, 0) = Scalar::one(H);
  s(1, 0) = Scalar::unit(H, 1);
  s(0, 1) = Scalar::unit(H, 2);
  s(1, 1) = Scalar::unit(H, 1) * Scalar::unit(H, 2);
  CHECK(det_abs(s).value == 0.0);
}

TEST_CASE("realify") {
  const FMat r = FMat::from_rows(Field::Real, {{Scalar(Field::Real, 2.0), Scalar(Field::Real, 3.0)},
                                               {Scalar(Field::Real, -1.0), Scalar(Field::Real, 5.0)}});
  const Eigen::MatrixXd rr = realify(r);
  CHECK(rr(0, 1) == 3.0);
  CHECK(rr(1, 0) == -1.0);

  const FMat i = FMat::from_rows(Field::Complex, {{Scalar(Field::Complex, 0.0, 1.0)}});
  Eigen::Matrix2d expect;
  expect << 0, -1, 1, 0;
  CHECK((realify(i) - expect).norm() == 0.0);

  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const FMat a = random_gaussian(H, 2, 2, rng);
    CHECK(rel(std::pow(det_abs(a).value, 4), std::abs(realify(a).determinant())) <= 1e-8);
    // The interleaved ordering is a permutation of the block one.
    CHECK(rel(std::abs(real_operator(a).determinant()), std::abs(realify(a).determinant())) <= 1e-10);
  }
}

TEST_CASE("row expansion") {
  const Field C = Field::Complex;
  const Scalar d1(C, 2.0, 1.0), d2(C, -0.5, 3.0);
  const auto l = row_expansion(FMat::diagonal({d1, d2}));
  CHECK(norm(l[0]) == doctest::Approx(norm(d2)));
  CHECK(norm(l[1]) == doctest::Approx(0.0));
  CHECK(norm(d1 * l[0]) == doctest::Approx(norm(d1) * norm(d2)));

  Rng rng(9);
  FMat dep = random_gaussian(H, 3, 3, rng);
  for (int c = 0; c < 3; ++c) dep(2, c) = Scalar(H, 0.3, -1.0, 0.2, 0.5) * dep(1, c);
  for (const auto& s : row_expansion(dep)) CHECK(s.is_zero());
  CHECK(det_abs(dep).value == 0.0);

  for (int t = 0; t < 100; ++t) {
    const FMat a = random_gaussian(H, 3, 3, rng);
    const auto lam = row_expansion(a);
    Scalar s = Scalar::zero(H);
    for (int k = 0; k < 3; ++k) s = s + a(0, k) * lam[static_cast<std::size_t>(k)];
    CHECK(rel(norm(s), det_abs(a).value) <= 1e-9);
    for (int k = 0; k < 3; ++k)
      CHECK(rel(norm(lam[static_cast<std::size_t>(k)]), det_abs(minor_matrix(a, 0, k)).value) <= 1e-9);
    // The (1,1)-minor is non-singular, so the first scalar is the real mu.
    CHECK(lam[0][1] == 0.0);
    CHECK(lam[0][0] > 0.0);
  }
  CHECK(row_expansion(FMat::identity(H, 1))[0][0] == 1.0);
}

TEST_CASE("row expansion depends only on rows 2..n") {
  Rng rng(13);
  FMat a = random_gaussian(H, 4, 4, rng);
  const auto l1 = row_expansion(a);
  for (int c = 0; c < 4; ++c) a(0, c) = Scalar(H, standard_normal(rng), standard_normal(rng));
  const auto l2 = row_expansion(a);
  for (int k = 0; k < 4; ++k) CHECK(approx_equal(l1[static_cast<std::size_t>(k)], l2[static_cast<std::size_t>(k)]));
}

TEST_CASE("tuple determinants and right action") {
  Rng rng(17);
  for (Field f : kFields) {
    const auto q = orthonormalize(random_gaussian(f, 4, 3, rng));
    REQUIRE(q.has_value());
    std::vector<FVector> cols{q->column(0), q->column(1), q->column(2)};
    CHECK(det_abs_tuple(cols).value == doctest::Approx(1.0).epsilon(1e-12));

    const FMat g = random_gaussian(f, 4, 2, rng);
    std::vector<FVector> pair{g.column(0), g.column(1)};
    const double base = det_abs_tuple(pair).value;
    const Scalar c(f, 0.7, f == Field::Real ? 0.0 : -1.3, f == H ? 0.4 : 0.0, f == H ? 2.0 : 0.0);
    std::vector<FVector> scaled{pair[0].times(c), pair[1]};
    CHECK(rel(det_abs_tuple(scaled).value, norm(c) * base) <= 1e-10);

    std::vector<FVector> dependent{pair[0], pair[0].times(c)};
    CHECK(det_abs_tuple(dependent).value == 0.0);

    CHECK(rel(det_abs_tuple(right_action(pair, FMat::identity(f, 2))).value, base) <= 1e-14);
    FMat perm(f, 2, 2);
    perm(0, 1) = Scalar::one(f);
    perm(1, 0) = Scalar::one(f);
    const auto swapped = right_action(pair, perm);
    CHECK(approx_equal(norm(swapped[0] - pair[1]), 0.0));
    CHECK(rel(det_abs_tuple(swapped).value, base) <= 1e-12);

    for (int t = 0; t < 100; ++t) {
      const FMat v = random_gaussian(f, 5, 3, rng);
      std::vector<FVector> tup{v.column(0), v.column(1), v.column(2)};
      const FMat a = random_gaussian(f, 3, 3, rng);
      CHECK(rel(det_abs_tuple(right_action(tup, a)).value, det_abs(a).value * det_abs_tuple(tup).value) <= 1e-9);
    }
  }
}

TEST_CASE("tuple determinant of a square tuple matches det_abs") {
  Rng rng(19);
  for (Field f : kFields) {
    for (int t = 0; t < 100; ++t) {
      const FMat a = random_gaussian(f, 4, 4, rng);
      std::vector<FVector> cols;
      for (int c = 0; c < 4; ++c) cols.push_back(a.column(c));
      CHECK(rel(det_abs_tuple(cols).value, det_abs(a).value) <= 1e-9);
    }
  }
}

TEST_CASE("unitary matrices have unit determinant") {
  Rng rng(23);
  for (Field f : kFields) {
    for (int t = 0; t < 100; ++t) {
      const auto q = orthonormalize(random_gaussian(f, 5, 5, rng));
      REQUIRE(q.has_value());
      CHECK(std::abs(det_abs(*q).value - 1.0) <= 1e-10);
      CHECK(mat_close(adjoint(*q) * *q, FMat::identity(f, 5), 1e-10));
    }
  }
}

TEST_CASE("Gram cross-validation") {
  Rng rng(29);
  for (Field f : kFields) {
    for (int t = 0; t < 100; ++t) {
      const FMat a = random_gaussian(f, 4, 4, rng);
      CHECK(rel(std::pow(det_abs(a).value, 2), det_abs(adjoint(a) * a).value) <= 1e-9);
    }
  }
}

TEST_CASE("transpose can change the quaternionic determinant") {
  // Random search for a witness; over R and C transposition never matters.
  Rng rng(31);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const FMat a = random_gaussian(H, 2, 2, rng);
    worst = std::max(worst, rel(det_abs(transpose(a)).value, det_abs(a).value));
  }
  CHECK(worst > 1e-3);
  for (Field f : {Field::Real, Field::Complex}) {
    for (int t = 0; t < 50; ++t) {
      const FMat a = random_gaussian(f, 3, 3, rng);
      CHECK(rel(det_abs(transpose(a)).value, det_abs(a).value) <= 1e-10);
    }
  }
}

TEST_CASE("solve and inverse") {
  Rng rng(37);
  for (Field f : kFields) {
    const FMat a = random_gaussian(f, 4, 4, rng);
    CHECK(mat_close(a * inverse(a), FMat::identity(f, 4), 1e-9));
    CHECK(mat_close(inverse(a) * a, FMat::identity(f, 4), 1e-9));
  }
  CHECK_THROWS_AS(inverse(FMat(H, 2, 2)), SingularTransform);
}

TEST_CASE("property suite passes on a short run") {
  for (Field f : kFields) {
    for (const auto& r : ncla_property_suite(f, 200, 42)) {
      INFO(r.name << " " << r.max_rel_error);
      CHECK(r.passed);
    }
  }
}
