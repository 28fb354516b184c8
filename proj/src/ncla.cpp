#include "bcg/ncla.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace bcg {

namespace {

void require_same_field(const FMat& a, const FMat& b) {
  if (a.field() != b.field()) throw FieldMismatch("matrix fields differ");
}

void require_square(const FMat& a, const char* what) {
  if (!a.square()) throw DimensionMismatch(std::string(what) + ": matrix is not square");
}

// Index of the largest-norm entry in column `c` among rows [from, rows).
int pivot_row(const FMat& a, int c, int from) {
  int best = from;
  double best_n = -1.0;
  for (int r = from; r < a.rows(); ++r) {
    const double v = norm2(a(r, c));
    if (v > best_n) {
      best_n = v;
      best = r;
    }
  }
  return best;
}

void swap_rows(FMat& a, int r1, int r2) {
  if (r1 == r2) return;
  for (int c = 0; c < a.cols(); ++c) std::swap(a(r1, c), a(r2, c));
}

// row_i <- row_i - f * row_k, columns from `from` on.
void row_axpy(FMat& a, int i, int k, const Scalar& f, int from = 0) {
  for (int c = from; c < a.cols(); ++c) a(i, c) = a(i, c) - mul_unchecked(f, a(k, c));
}

}  // namespace

FMat::FMat(Field f, int rows, int cols)
    : field_(f), rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), Scalar::zero(f)) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
}

FMat FMat::identity(Field f, int n) {
  FMat m(f, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Scalar::one(f);
  return m;
}

FMat FMat::diagonal(const std::vector<Scalar>& d) {
  if (d.empty()) throw DimensionMismatch("empty diagonal");
  const Field f = d.front().field;
  FMat m(f, static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].field != f) throw FieldMismatch("diagonal entries over different fields");
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  }
  return m;
}

FMat FMat::from_rows(Field f, const std::vector<std::vector<Scalar>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows.front().size()) : 0;
  FMat m(f, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c) throw DimensionMismatch("ragged matrix rows");
    for (int j = 0; j < c; ++j) {
      const Scalar& s = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (s.field != f) throw FieldMismatch("matrix entry field differs from matrix field");
      m(i, j) = s;
    }
  }
  return m;
}

FMat FMat::from_columns(std::span<const FVector> cols) {
  if (cols.empty()) throw DimensionMismatch("no columns");
  const Field f = cols.front().field();
  const int n = cols.front().size();
  FMat m(f, n, static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].field() != f) throw FieldMismatch("column fields differ");
    if (cols[c].size() != n) throw DimensionMismatch("column lengths differ");
    for (int r = 0; r < n; ++r) m(r, static_cast<int>(c)) = cols[c][r];
  }
  return m;
}

FVector FMat::column(int c) const {
  FVector v(field_, rows_);
  for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void FMat::set_column(int c, const FVector& v) {
  if (v.size() != rows_) throw DimensionMismatch("column length mismatch");
  if (v.field() != field_) throw FieldMismatch("column field mismatch");
  for (int r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

double FMat::max_entry_norm() const {
  double m = 0.0;
  for (const auto& s : data_) m = std::max(m, norm2(s));
  return std::sqrt(m);
}

FMat matmul(const FMat& a, const FMat& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) throw DimensionMismatch("inner dimensions disagree in matmul");
  FMat c(a.field(), a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      Scalar acc = Scalar::zero(a.field());
      for (int k = 0; k < a.cols(); ++k) {
        const Scalar t = mul_unchecked(a(i, k), b(k, j));
        for (int q = 0; q < 4; ++q) acc.x[static_cast<std::size_t>(q)] += t.x[static_cast<std::size_t>(q)];
      }
      c(i, j) = acc;
    }
  }
  return c;
}

FMat operator*(const FMat& a, const FMat& b) { return matmul(a, b); }

FMat operator+(const FMat& a, const FMat& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
  FMat c(a.field(), a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

FMat scale(const FMat& a, double s) {
  FMat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * s;
  return c;
}

FMat adjoint(const FMat& a) {
  FMat t(a.field(), a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = conj(a(i, j));
  return t;
}

FMat transpose(const FMat& a) {
  FMat t(a.field(), a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

FVector apply(const FMat& a, const FVector& v) {
  if (a.field() != v.field()) throw FieldMismatch("matrix and vector fields differ");
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector dimension mismatch");
  FVector out(a.field(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    Scalar acc = Scalar::zero(a.field());
    for (int k = 0; k < a.cols(); ++k) acc = acc + mul_unchecked(a(i, k), v[k]);
    out[i] = acc;
  }
  return out;
}

FMat minor_matrix(const FMat& a, int i, int j) {
  FMat m(a.field(), a.rows() - 1, a.cols() - 1);
  for (int r = 0, rr = 0; r < a.rows(); ++r) {
    if (r == i) continue;
    for (int c = 0, cc = 0; c < a.cols(); ++c) {
      if (c == j) continue;
      m(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return m;
}

bool is_hermitian(const FMat& a, double tol) {
  if (!a.square()) return false;
  const double s = std::max(1.0, a.max_entry_norm());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j <= i; ++j)
      if (norm(a(i, j) - conj(a(j, i))) > tol * s) return false;
  return true;
}

DetMagnitude det_abs(const FMat& a) {
  require_square(a, "det_abs");
  const int n = a.rows();
  if (n == 0) return {1.0};
  FMat w = a;
  const double tol = kPivotTolerance * w.max_entry_norm();
  if (tol == 0.0) return {0.0};
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    const int pr = pivot_row(w, k, k);
    const double pn = norm(w(pr, k));
    if (pn <= tol) return {0.0};
    swap_rows(w, pr, k);
    det *= pn;
    const Scalar pinv = inv(w(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (w(i, k).is_zero()) continue;
      row_axpy(w, i, k, mul_unchecked(w(i, k), pinv), k);
    }
  }
  return {det};
}

Eigen::MatrixXd realify(const FMat& a) {
  require_square(a, "realify");
  const int n = a.rows();
  const int p = real_dim(a.field());
  Eigen::MatrixXd m(p * n, p * n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < p; ++q) {
        const Scalar t = mul_unchecked(a(r, j), Scalar::unit(a.field(), q));
        for (int c = 0; c < p; ++c) m(c * n + r, q * n + j) = t[c];
      }
  return m;
}

Eigen::MatrixXd real_operator(const FMat& a) {
  const int p = real_dim(a.field());
  Eigen::MatrixXd m(p * a.rows(), p * a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int j = 0; j < a.cols(); ++j)
      for (int q = 0; q < p; ++q) {
        const Scalar t = mul_unchecked(a(r, j), Scalar::unit(a.field(), q));
        for (int c = 0; c < p; ++c) m(r * p + c, j * p + q) = t[c];
      }
  return m;
}

Eigen::MatrixXd real_columns(const FMat& a) { return real_operator(a); }

Eigen::MatrixXd right_multiplication_operator(const FMat& a, int m) {
  require_square(a, "right_multiplication_operator");
  const int n = a.rows();
  const int p = real_dim(a.field());
  const int d = m * n * p;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int row = 0; row < m; ++row)
    for (int b = 0; b < n; ++b)
      for (int q = 0; q < p; ++q) {
        const int col = (row * n + b) * p + q;
        const Scalar u = Scalar::unit(a.field(), q);
        for (int c = 0; c < n; ++c) {
          const Scalar t = mul_unchecked(u, a(b, c));
          for (int comp = 0; comp < p; ++comp) out((row * n + c) * p + comp, col) = t[comp];
        }
      }
  return out;
}

std::vector<Scalar> row_expansion(const FMat& a) {
  require_square(a, "row_expansion");
  const int n = a.rows();
  const Field f = a.field();
  if (n == 1) return {Scalar::one(f)};

  // Rows 2..n of A.
  FMat b(f, n - 1, n);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i - 1, j) = a(i, j);
  const double tol = kPivotTolerance * std::max(b.max_entry_norm(), a.max_entry_norm());
  std::vector<Scalar> zeros(static_cast<std::size_t>(n), Scalar::zero(f));
  if (b.max_entry_norm() == 0.0) return zeros;

  const bool pin_first = det_abs(minor_matrix(a, 0, 0)).value > 0.0;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  if (pin_first) used[0] = true;
  std::vector<int> pivot_col(static_cast<std::size_t>(n - 1), -1);

  for (int k = 0; k < n - 1; ++k) {
    int br = -1, bc = -1;
    double bn = -1.0;
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      for (int r = k; r < n - 1; ++r) {
        const double v = norm(b(r, c));
        if (v > bn) {
          bn = v;
          br = r;
          bc = c;
        }
      }
    }
    if (bc < 0 || bn <= tol) return zeros;
    swap_rows(b, br, k);
    used[static_cast<std::size_t>(bc)] = true;
    pivot_col[static_cast<std::size_t>(k)] = bc;
    const Scalar pinv = inv(b(k, bc));
    for (int i = 0; i < n - 1; ++i) {
      if (i == k || b(i, bc).is_zero()) continue;
      row_axpy(b, i, k, mul_unchecked(b(i, bc), pinv));
      b(i, bc) = Scalar::zero(f);
    }
  }

  int free_col = 0;
  if (!pin_first)
    while (used[static_cast<std::size_t>(free_col)]) ++free_col;

  double mu = 1.0;
  for (int k = 0; k < n - 1; ++k) mu *= norm(b(k, pivot_col[static_cast<std::size_t>(k)]));

  std::vector<Scalar> lambda(static_cast<std::size_t>(n), Scalar::zero(f));
  const Scalar mu_s(f, mu);
  lambda[static_cast<std::size_t>(free_col)] = mu_s;
  for (int k = 0; k < n - 1; ++k) {
    const int c = pivot_col[static_cast<std::size_t>(k)];
    const Scalar dinv = inv(b(k, c));
    lambda[static_cast<std::size_t>(c)] = -(mul_unchecked(mul_unchecked(dinv, b(k, free_col)), mu_s));
  }
  return lambda;
}

double det_abs_tuple(Field f, int n, int m, std::span<const double> coords) {
  const int p = real_dim(f);
  const auto len = static_cast<std::size_t>(n * p);
  if (coords.size() < len * static_cast<std::size_t>(m)) throw DimensionMismatch("tuple coordinate buffer too short");
  if (m > n) return 0.0;
  if (m == 0) return 1.0;

  // Orthonormal vectors found so far, entry-major with 4 slots per entry.
  constexpr std::size_t kStack = 4 * 8 * 8;
  std::array<double, kStack> stack_buf{};
  std::vector<double> heap_buf;
  const std::size_t need = 4 * static_cast<std::size_t>(n) * static_cast<std::size_t>(m + 1);
  double* q = stack_buf.data();
  if (need > kStack) {
    heap_buf.assign(need, 0.0);
    q = heap_buf.data();
  }
  const auto stride = static_cast<std::size_t>(4 * n);
  double* w = q + stride * static_cast<std::size_t>(m);

  double det = 1.0;
  for (int k = 0; k < m; ++k) {
    const double* v = coords.data() + len * static_cast<std::size_t>(k);
    double vn2 = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 4; ++c) w[4 * i + c] = c < p ? v[i * p + c] : 0.0;
      for (int c = 0; c < p; ++c) vn2 += v[i * p + c] * v[i * p + c];
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const double* qj = q + stride * static_cast<std::size_t>(j);
        // coef = sum conj(qj_i) w_i
        double cf[4] = {0, 0, 0, 0};
        for (int i = 0; i < n; ++i) {
          const double* a = qj + 4 * i;
          const double* b = w + 4 * i;
          const double a0 = a[0], a1 = -a[1], a2 = -a[2], a3 = -a[3];
          cf[0] += a0 * b[0] - a1 * b[1] - a2 * b[2] - a3 * b[3];
          cf[1] += a0 * b[1] + a1 * b[0] + a2 * b[3] - a3 * b[2];
          cf[2] += a0 * b[2] - a1 * b[3] + a2 * b[0] + a3 * b[1];
          cf[3] += a0 * b[3] + a1 * b[2] - a2 * b[1] + a3 * b[0];
        }
        // w -= qj * coef
        for (int i = 0; i < n; ++i) {
          const double* a = qj + 4 * i;
          double* b = w + 4 * i;
          b[0] -= a[0] * cf[0] - a[1] * cf[1] - a[2] * cf[2] - a[3] * cf[3];
          b[1] -= a[0] * cf[1] + a[1] * cf[0] + a[2] * cf[3] - a[3] * cf[2];
          b[2] -= a[0] * cf[2] - a[1] * cf[3] + a[2] * cf[0] + a[3] * cf[1];
          b[3] -= a[0] * cf[3] + a[1] * cf[2] - a[2] * cf[1] + a[3] * cf[0];
        }
      }
    }
    double r2 = 0.0;
    for (std::size_t t = 0; t < stride; ++t) r2 += w[t] * w[t];
    const double r = std::sqrt(r2);
    if (r <= kPivotTolerance * std::sqrt(vn2) || r == 0.0) return 0.0;
    det *= r;
    double* qk = q + stride * static_cast<std::size_t>(k);
    const double s = 1.0 / r;
    for (std::size_t t = 0; t < stride; ++t) qk[t] = w[t] * s;
  }
  return det;
}

DetMagnitude det_abs_tuple(std::span<const FVector> tuple) {
  if (tuple.empty()) return {1.0};
  const Field f = tuple.front().field();
  const int n = tuple.front().size();
  const int m = static_cast<int>(tuple.size());
  if (m > n) throw DimensionMismatch("tuple longer than ambient dimension");
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(n * m * real_dim(f)));
  for (const auto& v : tuple) {
    if (v.field() != f) throw FieldMismatch("tuple vectors over different fields");
    if (v.size() != n) throw DimensionMismatch("tuple vectors of different length");
    const auto r = v.to_real();
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return {det_abs_tuple(f, n, m, coords)};
}

std::vector<FVector> right_action(std::span<const FVector> tuple, const FMat& a) {
  if (static_cast<int>(tuple.size()) != a.rows()) throw DimensionMismatch("tuple length must equal row count");
  if (tuple.empty()) return {};
  const Field f = tuple.front().field();
  if (a.field() != f) throw FieldMismatch("tuple and matrix fields differ");
  const int n = tuple.front().size();
  std::vector<FVector> out;
  out.reserve(static_cast<std::size_t>(a.cols()));
  for (int c = 0; c < a.cols(); ++c) {
    FVector acc(f, n);
    for (int r = 0; r < a.rows(); ++r) acc = acc + tuple[static_cast<std::size_t>(r)].times(a(r, c));
    out.push_back(std::move(acc));
  }
  return out;
}

std::optional<FMat> orthonormalize(const FMat& a) {
  const Field f = a.field();
  std::vector<FVector> q;
  for (int c = 0; c < a.cols(); ++c) {
    FVector w = a.column(c);
    const double n0 = norm(w);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qj : q) w = w - qj.times(hermitian_inner(qj, w));
    const double r = norm(w);
    if (r == 0.0 || r <= kPivotTolerance * n0 * 1e3) return std::nullopt;
    q.push_back(w.times(Scalar(f, 1.0 / r)));
  }
  if (q.empty()) return FMat(f, a.rows(), 0);
  return FMat::from_columns(q);
}

FVector solve(const FMat& a, const FVector& b) {
  require_square(a, "solve");
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length mismatch");
  if (b.field() != a.field()) throw FieldMismatch("matrix and vector fields differ");
  const int n = a.rows();
  FMat w(a.field(), n, n + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = a(i, j);
    w(i, n) = b[i];
  }
  const double tol = kPivotTolerance * a.max_entry_norm();
  for (int k = 0; k < n; ++k) {
    const int pr = pivot_row(w, k, k);
    if (norm(w(pr, k)) <= tol || w(pr, k).is_zero()) throw SingularTransform("matrix is singular");
    swap_rows(w, pr, k);
    const Scalar pinv = inv(w(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (w(i, k).is_zero()) continue;
      row_axpy(w, i, k, mul_unchecked(w(i, k), pinv), k);
    }
  }
  FVector x(a.field(), n);
  for (int i = n - 1; i >= 0; --i) {
    Scalar s = w(i, n);
    for (int j = i + 1; j < n; ++j) s = s - mul_unchecked(w(i, j), x[j]);
    x[i] = mul_unchecked(inv(w(i, i)), s);
  }
  return x;
}

FMat inverse(const FMat& a) {
  require_square(a, "inverse");
  const int n = a.rows();
  FMat out(a.field(), n, n);
  for (int c = 0; c < n; ++c) {
    FVector e(a.field(), n);
    e[c] = Scalar::one(a.field());
    out.set_column(c, solve(a, e));
  }
  return out;
}

FMat random_gaussian(Field f, int rows, int cols, Rng& rng) {
  FMat m(f, rows, cols);
  const int p = real_dim(f);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Scalar s = Scalar::zero(f);
      for (int c = 0; c < p; ++c) s.x[static_cast<std::size_t>(c)] = standard_normal(rng);
      m(i, j) = s;
    }
  return m;
}

}  // namespace bcg
