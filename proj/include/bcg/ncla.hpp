#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bcg/montecarlo.hpp"
#include "bcg/scalars.hpp"

namespace bcg {

// Dense matrix over F. Matrices act by left multiplication on column
// coordinates of right F-modules, so the matrix of f o g is the product AB.
class FMat {
 public:
  FMat() = default;
  FMat(Field f, int rows, int cols);

  static FMat identity(Field f, int n);
  static FMat diagonal(const std::vector<Scalar>& d);
  static FMat from_rows(Field f, const std::vector<std::vector<Scalar>>& rows);
  // n x m matrix whose columns are the given vectors.
  static FMat from_columns(std::span<const FVector> cols);

  Field field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  const Scalar& operator()(int r, int c) const { return data_[index(r, c)]; }
  Scalar& operator()(int r, int c) { return data_[index(r, c)]; }

  FVector column(int c) const;
  void set_column(int c, const FVector& v);
  // Largest entry norm; 0 for the empty matrix.
  double max_entry_norm() const;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  Field field_ = Field::Real;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> data_;
};

FMat matmul(const FMat& a, const FMat& b);
FMat operator*(const FMat& a, const FMat& b);
FMat operator+(const FMat& a, const FMat& b);
FMat scale(const FMat& a, double s);
// Conjugate transpose.
FMat adjoint(const FMat& a);
FMat transpose(const FMat& a);
FVector apply(const FMat& a, const FVector& v);
// A with row i and column j removed.
FMat minor_matrix(const FMat& a, int i, int j);
bool is_hermitian(const FMat& a, double tol = 1e-10);

// Magnitude of the Dieudonne determinant. The coset phase is never formed.
struct DetMagnitude {
  double value = 0.0;
  explicit operator double() const { return value; }
};

// Pivots with norm at most this fraction of the largest entry norm count as
// zero.
constexpr double kPivotTolerance = 1e-12;

// Gaussian elimination with partial pivoting on entry norms; the product of
// pivot norms. Equals |det| over R and C.
DetMagnitude det_abs(const FMat& a);

// Real (p n) x (p n) matrix of x -> A x in the basis
// (e_1..e_n, e_1 i..e_n i, e_1 j..e_n j, e_1 k..e_n k), truncated to p blocks.
Eigen::MatrixXd realify(const FMat& a);
// Same map in the entry-major ordering used by FVector::to_real.
Eigen::MatrixXd real_operator(const FMat& a);
// Real matrix of M -> M A on Mat(m x n, F), entry-major coordinates.
Eigen::MatrixXd right_multiplication_operator(const FMat& a, int m);

// Scalars l_1..l_n depending only on rows 2..n of A with
// |a_11 l_1 + ... + a_1n l_n| = det_abs(A) and |l_i| = det_abs(A(1,i)).
// Rows 2..n are reduced by left row operations to a diagonal block plus one
// free column (the permutation normal form); the free column is pinned to 1
// whenever A(1,1) is non-singular. Dependent rows 2..n give all zeros.
std::vector<Scalar> row_expansion(const FMat& a);

// |det(v_1..v_m)| for m vectors in F^n: Gram-Schmidt with hermitian
// projections applied on the right (re-orthogonalized once), product of the
// residual norms.
DetMagnitude det_abs_tuple(std::span<const FVector> tuple);
// Hot-path variant: `coords` holds m consecutive points of n*p real
// coordinates each.
double det_abs_tuple(Field f, int n, int m, std::span<const double> coords);

// (v_1..v_m) A = (sum_r v_r A_r1, ..., sum_r v_r A_rm).
std::vector<FVector> right_action(std::span<const FVector> tuple, const FMat& a);

// Orthonormal columns spanning the columns of `a` (modified Gram-Schmidt with
// one re-orthogonalization pass). Empty when the columns are dependent.
std::optional<FMat> orthonormalize(const FMat& a);

// Solves A x = b by elimination; throws SingularTransform.
FVector solve(const FMat& a, const FVector& b);
FMat inverse(const FMat& a);

// i.i.d. standard Gaussian real components in every used slot.
FMat random_gaussian(Field f, int rows, int cols, Rng& rng);
// Real (p n) x (p m) matrix whose columns are the realified vectors b_c * u,
// c over columns of `a`, u over the units of the field, in entry-major order.
Eigen::MatrixXd real_columns(const FMat& a);

}  // namespace bcg
