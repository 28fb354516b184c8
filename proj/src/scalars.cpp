#include "bcg/scalars.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace bcg {

namespace {

void check_same(const Scalar& a, const Scalar& b) {
  if (a.field != b.field) {
    throw FieldMismatch("scalar operands over different fields: " +
                        std::string(field_tag(a.field)) + " vs " + std::string(field_tag(b.field)));
  }
}

#ifndef NDEBUG
bool respects_field(const Scalar& a) {
  for (int c = real_dim(a.field); c < 4; ++c) {
    if (a.x[static_cast<std::size_t>(c)] != 0.0) return false;
  }
  return true;
}
#endif

}  // namespace

std::string_view field_tag(Field f) {
  switch (f) {
    case Field::Real:
      return "R";
    case Field::Complex:
      return "C";
    case Field::Quaternion:
      return "H";
  }
  return "?";
}

Field parse_field(std::string_view tag) {
  if (tag == "R") return Field::Real;
  if (tag == "C") return Field::Complex;
  if (tag == "H") return Field::Quaternion;
  throw InvalidArgument("unknown field tag '" + std::string(tag) + "' (expected R, C or H)");
}

Scalar Scalar::unit(Field f, int q) {
  if (q < 0 || q >= real_dim(f)) throw InvalidArgument("unit index out of range for field");
  Scalar s = Scalar::zero(f);
  s.x[static_cast<std::size_t>(q)] = 1.0;
  return s;
}

Scalar Scalar::from_components(Field f, std::span<const double> c) {
  const int p = real_dim(f);
  if (static_cast<int>(c.size()) < p) throw DimensionMismatch("too few scalar components");
  Scalar s = Scalar::zero(f);
  for (int k = 0; k < p; ++k) s.x[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)];
  return s;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  check_same(a, b);
  return Scalar(a.field, a.x[0] + b.x[0], a.x[1] + b.x[1], a.x[2] + b.x[2], a.x[3] + b.x[3]);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  check_same(a, b);
  return Scalar(a.field, a.x[0] - b.x[0], a.x[1] - b.x[1], a.x[2] - b.x[2], a.x[3] - b.x[3]);
}

Scalar operator-(const Scalar& a) { return Scalar(a.field, -a.x[0], -a.x[1], -a.x[2], -a.x[3]); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  check_same(a, b);
  Scalar r = mul_unchecked(a, b);
  assert(respects_field(r));
  return r;
}

Scalar operator*(const Scalar& a, double s) {
  return Scalar(a.field, a.x[0] * s, a.x[1] * s, a.x[2] * s, a.x[3] * s);
}

Scalar operator*(double s, const Scalar& a) { return a * s; }

Scalar conj(const Scalar& a) { return Scalar(a.field, a.x[0], -a.x[1], -a.x[2], -a.x[3]); }

double re(const Scalar& a) { return a.x[0]; }

double norm2(const Scalar& a) {
  return a.x[0] * a.x[0] + a.x[1] * a.x[1] + a.x[2] * a.x[2] + a.x[3] * a.x[3];
}

double norm(const Scalar& a) { return std::sqrt(norm2(a)); }

Scalar inv(const Scalar& a) {
  const double n2 = norm2(a);
  if (n2 == 0.0) throw DivisionByZero("inverse of zero scalar");
  return conj(a) * (1.0 / n2);
}

bool approx_equal(double a, double b, double atol, double rtol) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

bool approx_equal(const Scalar& a, const Scalar& b, double atol, double rtol) {
  if (a.field != b.field) return false;
  const double scale = std::max(norm(a), norm(b));
  double diff2 = 0.0;
  for (int c = 0; c < 4; ++c) {
    const double d = a.x[static_cast<std::size_t>(c)] - b.x[static_cast<std::size_t>(c)];
    diff2 += d * d;
  }
  return std::sqrt(diff2) <= atol + rtol * scale;
}

FVector::FVector(Field f, int n) : field_(f), entries_(static_cast<std::size_t>(n), Scalar::zero(f)) {}

FVector::FVector(Field f, std::vector<Scalar> entries) : field_(f), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.field != f) throw FieldMismatch("vector entry field differs from vector field");
  }
}

std::vector<double> FVector::to_real() const {
  const int p = real_dim(field_);
  std::vector<double> out(entries_.size() * static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (int c = 0; c < p; ++c) out[i * static_cast<std::size_t>(p) + static_cast<std::size_t>(c)] = entries_[i][c];
  }
  return out;
}

FVector FVector::from_real(Field f, std::span<const double> coords) {
  const auto p = static_cast<std::size_t>(real_dim(f));
  if (coords.size() % p != 0) throw DimensionMismatch("real coordinate count is not a multiple of p");
  FVector v(f, static_cast<int>(coords.size() / p));
  for (std::size_t i = 0; i < coords.size() / p; ++i) {
    v.entries_[i] = Scalar::from_components(f, coords.subspan(i * p, p));
  }
  return v;
}

FVector FVector::times(const Scalar& a) const {
  FVector out(field_, size());
  for (int i = 0; i < size(); ++i) out[i] = (*this)[i] * a;
  return out;
}

FVector operator+(const FVector& v, const FVector& w) {
  if (v.field() != w.field()) throw FieldMismatch("vector fields differ");
  if (v.size() != w.size()) throw DimensionMismatch("vector lengths differ");
  FVector out(v.field(), v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = v[i] + w[i];
  return out;
}

FVector operator-(const FVector& v, const FVector& w) {
  if (v.field() != w.field()) throw FieldMismatch("vector fields differ");
  if (v.size() != w.size()) throw DimensionMismatch("vector lengths differ");
  FVector out(v.field(), v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = v[i] - w[i];
  return out;
}

Scalar hermitian_inner(const FVector& v, const FVector& w) {
  if (v.field() != w.field()) throw FieldMismatch("inner product over different fields");
  if (v.size() != w.size()) throw DimensionMismatch("inner product of vectors of different length");
  Scalar acc = Scalar::zero(v.field());
  for (int i = 0; i < v.size(); ++i) acc = acc + conj(v[i]) * w[i];
  return acc;
}

double euclidean_inner(const FVector& v, const FVector& w) { return re(hermitian_inner(v, w)); }

double norm(const FVector& v) {
  double s = 0.0;
  for (const auto& e : v.entries()) s += norm2(e);
  return std::sqrt(s);
}

}  // namespace bcg
