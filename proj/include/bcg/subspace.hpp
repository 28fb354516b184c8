#pragma once

#include <Eigen/Dense>

#include "bcg/ncla.hpp"

namespace bcg {

// m-dimensional F-subspace of F^n given by an orthonormal F-basis.
struct Subspace {
  Field field = Field::Real;
  int n = 0;
  int m = 0;
  FMat basis;                  // n x m, orthonormal columns
  Eigen::MatrixXd real_basis;  // (n p) x (m p), orthonormal columns b_c u_q

  // Takes an n x m matrix with orthonormal columns (checked to 1e-10).
  static Subspace from_basis(const FMat& b);
  // Orthonormalizes the columns first.
  static Subspace span_of(const FMat& b);

  int real_dim() const { return m * bcg::real_dim(field); }
  Eigen::VectorXd embed(const Eigen::VectorXd& w) const { return real_basis * w; }
  Eigen::VectorXd coords(const Eigen::VectorXd& x) const { return real_basis.transpose() * x; }
  // Real orthogonal projector onto E.
  Eigen::MatrixXd projector() const { return real_basis * real_basis.transpose(); }
};

}  // namespace bcg
