#include "bcg/subspace.hpp"

namespace bcg {

Subspace Subspace::from_basis(const FMat& b) {
  if (b.cols() < 1 || b.cols() > b.rows()) throw DimensionMismatch("subspace basis must be n x m with 1 <= m <= n");
  const FMat g = adjoint(b) * b;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) {
      const Scalar want = i == j ? Scalar::one(b.field()) : Scalar::zero(b.field());
      if (norm(g(i, j) - want) > 1e-10) throw InvalidArgument("subspace basis is not orthonormal");
    }
  Subspace s;
  s.field = b.field();
  s.n = b.rows();
  s.m = b.cols();
  s.basis = b;
  s.real_basis = real_columns(b);
  return s;
}

Subspace Subspace::span_of(const FMat& b) {
  auto q = orthonormalize(b);
  if (!q) throw InvalidArgument("subspace spanning vectors are dependent");
  return from_basis(*q);
}

}  // namespace bcg
