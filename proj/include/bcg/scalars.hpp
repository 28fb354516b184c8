#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bcg/errors.hpp"

namespace bcg {

// The division algebra a computation runs over. The real dimension p is 1, 2
// or 4.
enum class Field : std::uint8_t { Real, Complex, Quaternion };

constexpr int real_dim(Field f) {
  switch (f) {
    case Field::Real:
      return 1;
    case Field::Complex:
      return 2;
    case Field::Quaternion:
      return 4;
  }
  return 1;
}

// "R", "C", "H".
std::string_view field_tag(Field f);
Field parse_field(std::string_view tag);

// Element of R, C or H stored as x0 + x1 i + x2 j + x3 k. Components beyond
// the field's real dimension are zero.
struct Scalar {
  std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};
  Field field = Field::Real;

  constexpr Scalar() = default;
  constexpr Scalar(Field f, double x0, double x1 = 0.0, double x2 = 0.0, double x3 = 0.0)
      : x{x0, x1, x2, x3}, field(f) {}

  static Scalar zero(Field f) { return Scalar(f, 0.0); }
  static Scalar one(Field f) { return Scalar(f, 1.0); }
  // The q-th basis unit (1, i, j, k); q must be below real_dim(f).
  static Scalar unit(Field f, int q);
  // Reads p consecutive components from a real coordinate array.
  static Scalar from_components(Field f, std::span<const double> c);

  double operator[](int c) const { return x[static_cast<std::size_t>(c)]; }
  bool is_zero() const { return x[0] == 0.0 && x[1] == 0.0 && x[2] == 0.0 && x[3] == 0.0; }
};

Scalar operator+(const Scalar& a, const Scalar& b);
Scalar operator-(const Scalar& a, const Scalar& b);
Scalar operator-(const Scalar& a);
// Hamilton product; throws FieldMismatch when tags differ.
Scalar operator*(const Scalar& a, const Scalar& b);
Scalar operator*(const Scalar& a, double s);
Scalar operator*(double s, const Scalar& a);

Scalar conj(const Scalar& a);
double re(const Scalar& a);
double norm2(const Scalar& a);
double norm(const Scalar& a);
// conj(a) / |a|^2; throws DivisionByZero for a == 0.
Scalar inv(const Scalar& a);

// Product without the field check, for inner loops whose operands are known
// to share a field.
inline Scalar mul_unchecked(const Scalar& a, const Scalar& b) {
  Scalar r;
  r.field = a.field;
  const auto& p = a.x;
  const auto& q = b.x;
  r.x[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
  r.x[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2];
  r.x[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
  r.x[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0];
  return r;
}

bool approx_equal(double a, double b, double atol = 1e-12, double rtol = 1e-10);
bool approx_equal(const Scalar& a, const Scalar& b, double atol = 1e-12, double rtol = 1e-10);

// Column vector in F^n, viewed as a right F-module.
class FVector {
 public:
  FVector() = default;
  FVector(Field f, int n);
  FVector(Field f, std::vector<Scalar> entries);

  Field field() const { return field_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const Scalar& operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  Scalar& operator[](int i) { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<Scalar>& entries() const { return entries_; }

  // Real coordinates of length n*p, entry-major: (Re z1, Im z1, Re z2, ...).
  std::vector<double> to_real() const;
  static FVector from_real(Field f, std::span<const double> coords);

  // v * a, the right scalar action.
  FVector times(const Scalar& a) const;

 private:
  Field field_ = Field::Real;
  std::vector<Scalar> entries_;
};

FVector operator+(const FVector& v, const FVector& w);
FVector operator-(const FVector& v, const FVector& w);

// (v, w) = sum conj(v_i) w_i.
Scalar hermitian_inner(const FVector& v, const FVector& w);
// Re (v, w).
double euclidean_inner(const FVector& v, const FVector& w);
double norm(const FVector& v);

}  // namespace bcg
