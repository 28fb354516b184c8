#include "bcg/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bcg/ball_constants.hpp"
#include "body_impls.hpp"

namespace bcg {

using detail::EllipsoidImpl;
using detail::EmptyImpl;
using detail::PolytopeImpl;

namespace {

Eigen::Map<const Vec> as_vec(std::span<const double> x) {
  return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

void check_vec(const Vec& v, int d, const char* what) {
  if (v.size() != d) throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(d) + " real coordinates");
}

// Slab intersection for lo <= base + t dir <= hi.
Interval box_chord(const Vec& lo, const Vec& hi, const Vec& base, const Vec& dir) {
  Interval r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    if (dir[i] == 0.0) {
      if (base[i] < lo[i] || base[i] > hi[i]) return Interval{};
      continue;
    }
    double a = (lo[i] - base[i]) / dir[i];
    double b = (hi[i] - base[i]) / dir[i];
    if (a > b) std::swap(a, b);
    r.lo = std::max(r.lo, a);
    r.hi = std::min(r.hi, b);
  }
  return r;
}

class BoxImpl final : public BodyImpl {
 public:
  BoxImpl(Field f, int n, const Vec& lo, const Vec& hi) : BodyImpl(BodyKind::Box, f, n), lo_(lo), hi_(hi) {
    check_vec(lo, dim(), "box");
    check_vec(hi, dim(), "box");
    volume_ = 1.0;
    for (int i = 0; i < dim(); ++i) {
      if (!(hi[i] > lo[i])) throw InvalidArgument("box needs lo < hi in every coordinate");
      volume_ *= hi[i] - lo[i];
    }
    set_bounds(0.5 * (lo + hi), 0.5 * (hi - lo).norm());
    set_box(lo, hi);
  }

  bool contains(std::span<const double> x) const override {
    for (int i = 0; i < dim(); ++i) {
      const double v = x[static_cast<std::size_t>(i)];
      if (v < lo_[i] || v > hi_[i]) return false;
    }
    return true;
  }
  std::optional<double> exact_volume() const override { return volume_; }
  std::optional<double> support(const Vec& u) const override {
    double h = 0.0;
    for (int i = 0; i < dim(); ++i) h += u[i] > 0 ? u[i] * hi_[i] : u[i] * lo_[i];
    return h;
  }
  std::optional<Vec> centroid() const override { return Vec(0.5 * (lo_ + hi_)); }
  std::optional<Interval> chord(const Vec& base, const Vec& dir) const override {
    return box_chord(lo_, hi_, base, dir);
  }
  std::optional<double> fiber_volume(const Vec& y, const Mat& N) const override {
    const int d = dim();
    Mat normals(2 * d, d);
    normals << Mat::Identity(d, d), -Mat::Identity(d, d);
    Vec offsets(2 * d);
    offsets << hi_, -lo_;
    return detail::halfspace_fiber_volume(normals, offsets, y, N, N.transpose() * (bound_center() - y), bound_radius());
  }
  bool direct_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override {
    for (int i = 0; i < dim(); ++i) out[static_cast<std::size_t>(i)] = lo_[i] + (hi_[i] - lo_[i]) * uniform01(rng);
  }

 private:
  Vec lo_, hi_;
  double volume_;
};

class L1BallImpl final : public BodyImpl {
 public:
  L1BallImpl(Field f, int n, double r) : BodyImpl(BodyKind::L1Ball, f, n), r_(r) {
    if (!(r > 0.0)) throw InvalidArgument("l1 ball radius must be positive");
    const int p = real_dim(f);
    volume_ = std::exp(n * (std::log(omega(p)) + std::lgamma(p)) - std::lgamma(n * p + 1.0) +
                       n * p * std::log(r));
    set_bounds(Vec::Zero(dim()), r);
    set_box(Vec::Constant(dim(), -r), Vec::Constant(dim(), r));
  }

  bool contains(std::span<const double> x) const override {
    const int p = real_dim(field());
    double s = 0.0;
    for (int i = 0; i < n(); ++i) {
      double e = 0.0;
      for (int c = 0; c < p; ++c) e += x[static_cast<std::size_t>(i * p + c)] * x[static_cast<std::size_t>(i * p + c)];
      s += std::sqrt(e);
    }
    return s <= r_;
  }
  std::optional<double> exact_volume() const override { return volume_; }
  std::optional<double> support(const Vec& u) const override {
    const int p = real_dim(field());
    double m = 0.0;
    for (int i = 0; i < n(); ++i) m = std::max(m, u.segment(i * p, p).norm());
    return r_ * m;
  }
  std::optional<Vec> centroid() const override { return Vec(Vec::Zero(dim())); }
  bool direct_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override {
    // Entry norms over r follow Dirichlet(p, ..., p, 1).
    const int p = real_dim(field());
    std::gamma_distribution<double> gp(static_cast<double>(p), 1.0);
    std::exponential_distribution<double> g1(1.0);
    double g[kMaxDim];
    double total = g1(rng);
    for (int i = 0; i < n(); ++i) {
      g[i] = gp(rng);
      total += g[i];
    }
    for (int i = 0; i < n(); ++i) {
      auto seg = out.subspan(static_cast<std::size_t>(i * p), static_cast<std::size_t>(p));
      uniform_direction(rng, seg);
      const double rho = r_ * g[i] / total;
      for (auto& v : seg) v *= rho;
    }
  }

 private:
  double r_;
  double volume_;
};

class OracleImpl final : public BodyImpl {
 public:
  OracleImpl(Field f, int n, std::function<bool(std::span<const double>)> member, const Vec& c, double r)
      : BodyImpl(BodyKind::OracleOnly, f, n), member_(std::move(member)) {
    check_vec(c, dim(), "oracle center");
    if (!(r > 0.0)) throw InvalidArgument("bounding radius must be positive");
    set_bounds(c, r);
  }
  bool contains(std::span<const double> x) const override { return member_(x); }

 private:
  std::function<bool(std::span<const double>)> member_;
};

class AffineImageImpl final : public BodyImpl {
 public:
  AffineImageImpl(ConvexBody parent, const FMat& a, const FVector& b)
      : BodyImpl(BodyKind::AffineImage, parent.field(), parent.n()), parent_(std::move(parent)) {
    det_ = det_abs(a).value;
    if (det_ == 0.0) throw SingularTransform("affine_image needs an invertible matrix");
    ar_ = real_operator(a);
    ar_inv_ = ar_.inverse();
    const auto br = b.to_real();
    b_ = Eigen::Map<const Vec>(br.data(), static_cast<Eigen::Index>(br.size()));
    const double op = Eigen::JacobiSVD<Mat>(ar_).singularValues()(0);
    const BodyImpl& p = parent_.impl();
    set_bounds(ar_ * p.bound_center() + b_, p.bound_radius() * op);
  }

  bool contains(std::span<const double> x) const override {
    double buf[kMaxDim];
    Eigen::Map<Vec> y(buf, dim());
    y.noalias() = ar_inv_ * (as_vec(x) - b_);
    return parent_.impl().contains(std::span<const double>(buf, static_cast<std::size_t>(dim())));
  }
  std::optional<double> exact_volume() const override {
    const auto v = parent_.exact_volume();
    if (!v) return std::nullopt;
    return std::pow(det_, real_dim(field())) * *v;
  }
  std::optional<double> support(const Vec& u) const override {
    const auto h = parent_.impl().support(ar_.transpose() * u);
    if (!h) return std::nullopt;
    return b_.dot(u) + *h;
  }
  std::optional<Vec> centroid() const override {
    const auto c = parent_.impl().centroid();
    if (!c) return std::nullopt;
    return Vec(ar_ * *c + b_);
  }
  std::optional<Interval> chord(const Vec& base, const Vec& dir) const override {
    return parent_.impl().chord(ar_inv_ * (base - b_), ar_inv_ * dir);
  }
  std::optional<double> fiber_volume(const Vec& y, const Mat& N) const override {
    // {a : A^{-1}(y - b) + A^{-1} N a in K}; orthonormalize A^{-1} N = Q R.
    const Mat m = ar_inv_ * N;
    const Eigen::HouseholderQR<Mat> qr(m);
    const Mat q = qr.householderQ() * Mat::Identity(m.rows(), m.cols());
    const Mat r = q.transpose() * m;
    const auto v = parent_.impl().fiber_volume(ar_inv_ * (y - b_), q);
    if (!v) return std::nullopt;
    return *v / std::abs(r.determinant());
  }
  bool direct_sampler() const override { return parent_.impl().direct_sampler(); }
  void sample(Rng& rng, std::span<double> out) const override {
    if (!parent_.impl().direct_sampler()) {
      sample_by_rejection(rng, out);
      return;
    }
    double buf[kMaxDim];
    parent_.impl().sample(rng, std::span<double>(buf, static_cast<std::size_t>(dim())));
    Eigen::Map<Vec>(out.data(), dim()) = ar_ * Eigen::Map<const Vec>(buf, dim()) + b_;
  }

 private:
  ConvexBody parent_;
  Mat ar_, ar_inv_;
  Vec b_;
  double det_;
};

class SectionImpl final : public BodyImpl {
 public:
  SectionImpl(ConvexBody parent, const Subspace& e, const Vec& y)
      : BodyImpl(BodyKind::Section, e.field, e.m), parent_(std::move(parent)), N_(e.real_basis), y_(y) {}

  // False when the bounds show the section is empty.
  bool init_bounds() {
    const BodyImpl& p = parent_.impl();
    const Vec c = p.bound_center() - y_;
    const Vec wc = N_.transpose() * c;
    const double d2 = (c - N_ * wc).squaredNorm();
    const double r2 = p.bound_radius() * p.bound_radius() - d2;
    if (r2 <= 0.0) return false;
    set_bounds(wc, std::sqrt(r2));
    if (p.support(N_.col(0))) {
      Vec lo(dim()), hi(dim());
      for (int k = 0; k < dim(); ++k) {
        const Vec dk = N_.col(k);
        const double off = dk.dot(y_);
        hi[k] = *p.support(dk) - off;
        lo[k] = -*p.support(-dk) - off;
        if (!(lo[k] < hi[k])) return false;
      }
      set_box(lo, hi);
    }
    return true;
  }

  bool contains(std::span<const double> w) const override {
    double buf[kMaxDim];
    const int d = parent_.dim();
    Eigen::Map<Vec> x(buf, d);
    x.noalias() = y_ + N_ * as_vec(w);
    return parent_.impl().contains(std::span<const double>(buf, static_cast<std::size_t>(d)));
  }
  std::optional<Interval> chord(const Vec& base, const Vec& dir) const override {
    return parent_.impl().chord(y_ + N_ * base, N_ * dir);
  }

 private:
  ConvexBody parent_;
  Mat N_;
  Vec y_;
};

}  // namespace

std::string_view kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::Ball:
      return "ball";
    case BodyKind::Ellipsoid:
      return "ellipsoid";
    case BodyKind::Box:
      return "box";
    case BodyKind::VPolytope:
      return "vpolytope";
    case BodyKind::AffineImage:
      return "affine_image";
    case BodyKind::Section:
      return "section";
    case BodyKind::Symmetrized:
      return "symmetrized";
    case BodyKind::OracleOnly:
      return "oracle";
    case BodyKind::L1Ball:
      return "l1ball";
    case BodyKind::Empty:
      return "empty";
  }
  return "?";
}

double RestrictedForm::volume() const {
  if (!(rho > 0.0)) return 0.0;
  const int k = static_cast<int>(G.rows());
  return kappa(k) * std::pow(rho, 0.5 * k) / std::sqrt(G.determinant());
}

RestrictedForm restrict_ellipsoid(const EllipsoidForm& e, const Vec& y, const Mat& N) {
  const Vec dy = y - e.center;
  RestrictedForm r;
  r.G = N.transpose() * e.Q * N;
  const Vec g = N.transpose() * (e.Q * dy);
  const Eigen::LDLT<Mat> ldlt(r.G);
  r.w0 = -ldlt.solve(g);
  r.rho = 1.0 - dy.dot(e.Q * dy) - g.dot(r.w0);
  return r;
}

BodyImpl::BodyImpl(BodyKind kind, Field f, int n) : kind_(kind), field_(f), n_(n), dim_(n * real_dim(f)) {
  if (n < 1) throw DimensionMismatch("body dimension must be at least 1");
  if (dim_ > kMaxDim) throw DimensionMismatch("real dimension exceeds " + std::to_string(kMaxDim));
  bound_center_ = Vec::Zero(dim_);
}

void BodyImpl::set_bounds(Vec center, double radius) {
  bound_center_ = std::move(center);
  bound_radius_ = radius;
}

void BodyImpl::set_box(Vec lo, Vec hi) { box_ = std::make_pair(std::move(lo), std::move(hi)); }

double BodyImpl::proposal_volume() const {
  const double ball = kappa(dim_) * std::pow(bound_radius_, dim_);
  if (box_) return std::min(ball, (box_->second - box_->first).prod());
  return ball;
}

void BodyImpl::propose(Rng& rng, std::span<double> out) const {
  const double ball = kappa(dim_) * std::pow(bound_radius_, dim_);
  if (box_ && (box_->second - box_->first).prod() < ball) {
    for (int i = 0; i < dim_; ++i)
      out[static_cast<std::size_t>(i)] = box_->first[i] + (box_->second[i] - box_->first[i]) * uniform01(rng);
    return;
  }
  uniform_in_ball(rng, out);
  for (int i = 0; i < dim_; ++i)
    out[static_cast<std::size_t>(i)] = bound_center_[i] + bound_radius_ * out[static_cast<std::size_t>(i)];
}

void BodyImpl::sample_by_rejection(Rng& rng, std::span<double> out) const {
  for (std::uint64_t t = 0; t < kRejectionBudget; ++t) {
    propose(rng, out);
    if (contains(out)) return;
  }
  throw RejectionBudgetExceeded("no accepted sample in " + std::to_string(kRejectionBudget) + " proposals");
}

namespace detail {

EllipsoidImpl::EllipsoidImpl(BodyKind kind, Field f, int n, const Vec& center, const Mat& Q, std::optional<FMat> H)
    : BodyImpl(kind, f, n) {
  check_vec(center, dim(), "ellipsoid center");
  if (Q.rows() != dim() || Q.cols() != dim()) throw DimensionMismatch("ellipsoid form has wrong size");
  const Mat sym = 0.5 * (Q + Q.transpose());
  if ((sym - Q).norm() > 1e-10 * std::max(1.0, Q.norm())) throw NotPositiveDefinite("ellipsoid form is not symmetric");
  const Eigen::LLT<Mat> llt(sym);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("ellipsoid form is not positive definite");
  const Mat L = llt.matrixL();
  for (int i = 0; i < dim(); ++i)
    if (!(L(i, i) > 0.0)) throw NotPositiveDefinite("ellipsoid form is not positive definite");
  form_.center = center;
  form_.Q = sym;
  form_.Qinv = llt.solve(Mat::Identity(dim(), dim()));
  form_.sampler = L.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(dim(), dim()));
  double logdet = 0.0;
  for (int i = 0; i < dim(); ++i) logdet += std::log(L(i, i));
  form_.volume = kappa(dim()) * std::exp(-logdet);
  form_.H = std::move(H);
  const Eigen::SelfAdjointEigenSolver<Mat> es(form_.Qinv, Eigen::EigenvaluesOnly);
  set_bounds(center, std::sqrt(es.eigenvalues().maxCoeff()));
  const Vec half = form_.Qinv.diagonal().cwiseSqrt();
  set_box(center - half, center + half);
}

bool EllipsoidImpl::contains(std::span<const double> x) const {
  const int d = dim();
  double dx[kMaxDim];
  for (int i = 0; i < d; ++i) dx[i] = x[static_cast<std::size_t>(i)] - form_.center[i];
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    double t = 0.0;
    for (int i = 0; i < d; ++i) t += form_.Q(i, j) * dx[i];
    s += t * dx[j];
  }
  return s <= 1.0;
}

std::optional<double> EllipsoidImpl::support(const Vec& u) const {
  return form_.center.dot(u) + std::sqrt(std::max(0.0, u.dot(form_.Qinv * u)));
}

std::optional<Interval> EllipsoidImpl::chord(const Vec& base, const Vec& dir) const {
  const Vec dx = base - form_.center;
  const Vec qd = form_.Q * dir;
  const double a = dir.dot(qd);
  const double b = dx.dot(qd);
  const double c = dx.dot(form_.Q * dx) - 1.0;
  const double disc = b * b - a * c;
  if (!(a > 0.0) || disc < 0.0) return Interval{};
  const double s = std::sqrt(disc);
  return Interval{(-b - s) / a, (-b + s) / a};
}

std::optional<double> EllipsoidImpl::fiber_volume(const Vec& y, const Mat& N) const {
  return restrict_ellipsoid(form_, y, N).volume();
}

void EllipsoidImpl::sample(Rng& rng, std::span<double> out) const {
  const int d = dim();
  double y[kMaxDim];
  uniform_in_ball(rng, std::span<double>(y, static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i) {
    double v = form_.center[i];
    for (int j = i; j < d; ++j) v += form_.sampler(i, j) * y[j];
    out[static_cast<std::size_t>(i)] = v;
  }
}

EmptyImpl::EmptyImpl(Field f, int n) : BodyImpl(BodyKind::Empty, f, n) {}

void EmptyImpl::sample(Rng&, std::span<double>) const {
  throw RejectionBudgetExceeded("cannot sample an empty body");
}

}  // namespace detail

ConvexBody::ConvexBody(std::shared_ptr<const BodyImpl> impl) : impl_(std::move(impl)) {
  if (!impl_) throw InvalidArgument("null body");
}

double ConvexBody::bounding_radius() const { return impl_->bound_center().norm() + impl_->bound_radius(); }

bool ConvexBody::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw DimensionMismatch("point has wrong real dimension");
  return impl_->contains(x);
}

bool ConvexBody::contains(const FVector& x) const {
  if (x.field() != field()) throw FieldMismatch("point and body fields differ");
  const auto r = x.to_real();
  return contains(std::span<const double>(r));
}

Estimate ConvexBody::volume(std::uint64_t samples, std::uint64_t seed, int workers) const {
  if (const auto v = impl_->exact_volume()) return Estimate::exact(*v);
  const BodyImpl& body = *impl_;
  const Accumulator acc = parallel_accumulate(samples, workers, seed, [&](Rng& rng, std::uint64_t quota, Accumulator& a, int) {
    double buf[kMaxDim];
    const std::span<double> x(buf, static_cast<std::size_t>(body.dim()));
    for (std::uint64_t i = 0; i < quota; ++i) {
      body.propose(rng, x);
      a.add(body.contains(x) ? 1.0 : 0.0);
    }
  });
  return to_estimate(acc, seed, body.proposal_volume());
}

ConvexBody make_ball(Field f, int n, const Vec& center, double r) {
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  const int d = n * real_dim(f);
  FMat H = scale(FMat::identity(f, n), 1.0 / (r * r));
  return ConvexBody(std::make_shared<EllipsoidImpl>(BodyKind::Ball, f, n, center, Mat::Identity(d, d) / (r * r), H));
}

ConvexBody make_unit_ball(Field f, int n) { return make_ball(f, n, Vec::Zero(n * real_dim(f)), 1.0); }

ConvexBody make_ellipsoid(const FVector& a, const FMat& H) {
  if (H.field() != a.field()) throw FieldMismatch("ellipsoid center and form over different fields");
  if (!H.square() || H.rows() != a.size()) throw DimensionMismatch("ellipsoid form must be n x n");
  if (!is_hermitian(H)) throw NotPositiveDefinite("ellipsoid form is not hermitian");
  const auto c = a.to_real();
  return ConvexBody(std::make_shared<EllipsoidImpl>(BodyKind::Ellipsoid, a.field(), a.size(),
                                                    Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size())),
                                                    real_operator(H), H));
}

ConvexBody make_real_ellipsoid(Field f, int n, const Vec& center, const Mat& Q) {
  return ConvexBody(std::make_shared<EllipsoidImpl>(BodyKind::Ellipsoid, f, n, center, Q, std::nullopt));
}

ConvexBody make_box(Field f, int n, const Vec& lo, const Vec& hi) {
  return ConvexBody(std::make_shared<BoxImpl>(f, n, lo, hi));
}

ConvexBody make_vpolytope(Field f, int n, const std::vector<Vec>& vertices) {
  return ConvexBody(std::make_shared<PolytopeImpl>(f, n, vertices));
}

ConvexBody make_l1_ball(Field f, int n, double r) { return ConvexBody(std::make_shared<L1BallImpl>(f, n, r)); }

ConvexBody make_oracle(Field f, int n, std::function<bool(std::span<const double>)> member, const Vec& center,
                       double radius) {
  return ConvexBody(std::make_shared<OracleImpl>(f, n, std::move(member), center, radius));
}

ConvexBody affine_image(const ConvexBody& k, const FMat& a, const FVector& b) {
  if (a.field() != k.field() || b.field() != k.field()) throw FieldMismatch("affine map and body over different fields");
  if (!a.square() || a.rows() != k.n() || b.size() != k.n()) throw DimensionMismatch("affine map has wrong size");
  if (det_abs(a).value == 0.0) throw SingularTransform("affine_image needs an invertible matrix");
  const Mat ar = real_operator(a);
  const auto br = b.to_real();
  const Vec bv = Eigen::Map<const Vec>(br.data(), static_cast<Eigen::Index>(br.size()));

  if (const EllipsoidForm* e = k.ellipsoid()) {
    const Mat ainv = ar.inverse();
    const Mat q = ainv.transpose() * e->Q * ainv;
    std::optional<FMat> h;
    if (e->H) {
      const FMat inv_a = inverse(a);
      h = adjoint(inv_a) * *e->H * inv_a;
    }
    return ConvexBody(std::make_shared<EllipsoidImpl>(BodyKind::Ellipsoid, k.field(), k.n(), ar * e->center + bv,
                                                      0.5 * (q + q.transpose()), h));
  }
  if (const auto* poly = dynamic_cast<const PolytopeImpl*>(&k.impl())) {
    std::vector<Vec> v;
    v.reserve(poly->vertices().size());
    for (const auto& x : poly->vertices()) v.push_back(ar * x + bv);
    return make_vpolytope(k.field(), k.n(), v);
  }
  return ConvexBody(std::make_shared<AffineImageImpl>(k, a, b));
}

ConvexBody affine_image(const ConvexBody& k, const FMat& a) { return affine_image(k, a, FVector(k.field(), k.n())); }

ConvexBody section(const ConvexBody& k, const Subspace& e, const Vec& y) {
  if (e.field != k.field()) throw FieldMismatch("subspace and body over different fields");
  if (e.n != k.n()) throw DimensionMismatch("subspace ambient dimension differs from body");
  check_vec(y, k.dim(), "section offset");
  if (const EllipsoidForm* form = k.ellipsoid()) {
    const RestrictedForm r = restrict_ellipsoid(*form, y, e.real_basis);
    if (!(r.rho > 0.0)) return ConvexBody(std::make_shared<EmptyImpl>(e.field, e.m));
    std::optional<FMat> h;
    if (form->H) h = scale(adjoint(e.basis) * *form->H * e.basis, 1.0 / r.rho);
    const Mat q = r.G / r.rho;
    return ConvexBody(
        std::make_shared<EllipsoidImpl>(BodyKind::Ellipsoid, e.field, e.m, r.w0, 0.5 * (q + q.transpose()), h));
  }
  auto s = std::make_shared<SectionImpl>(k, e, y);
  if (!s->init_bounds()) return ConvexBody(std::make_shared<EmptyImpl>(e.field, e.m));
  return ConvexBody(std::move(s));
}

}  // namespace bcg
