#include "bcg/symmetrize.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "bcg/ball_constants.hpp"

namespace bcg {

namespace {

std::span<const double> as_span(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Cube rejection is cheaper than the gaussian route for p <= 2.
void fiber_point(Rng& rng, int p, double* a) {
  if (p > 2) {
    uniform_in_ball(rng, std::span<double>(a, static_cast<std::size_t>(p)));
    return;
  }
  double r2;
  do {
    r2 = 0.0;
    for (int q = 0; q < p; ++q) {
      a[q] = 2.0 * uniform01(rng) - 1.0;
      r2 += a[q] * a[q];
    }
  } while (r2 > 1.0);
}

class SteinerImpl final : public BodyImpl {
 public:
  SteinerImpl(ConvexBody parent, const Vec& u)
      : BodyImpl(BodyKind::Symmetrized, parent.field(), parent.n()), parent_(std::move(parent)), u_(u) {
    const Vec& c = parent_.impl().bound_center();
    set_bounds(c - c.dot(u_) * u_, parent_.impl().bound_radius());
  }

  bool contains(std::span<const double> x) const override {
    const Vec xv = Eigen::Map<const Vec>(x.data(), dim());
    const double s = xv.dot(u_);
    const double half = 0.5 * bcg::chord(parent_, xv - s * u_, u_).length();
    return half > 0.0 && std::abs(s) <= half;
  }
  std::optional<Vec> centroid() const override {
    const auto c = parent_.impl().centroid();
    if (!c) return std::nullopt;
    return Vec(*c - c->dot(u_) * u_);
  }
  std::optional<Interval> chord(const Vec& base, const Vec& dir) const override {
    // Only chords parallel to the normal are known in closed form.
    const double along = dir.dot(u_);
    if (along == 0.0 || (dir - along * u_).norm() > 1e-12 * dir.norm()) return std::nullopt;
    const double s = base.dot(u_);
    const double half = 0.5 * bcg::chord(parent_, base - s * u_, u_).length();
    if (!(half > 0.0)) return Interval{};
    const double t1 = (-half - s) / along, t2 = (half - s) / along;
    return Interval{std::min(t1, t2), std::max(t1, t2)};
  }
  bool direct_sampler() const override { return parent_.impl().direct_sampler(); }
  void sample(Rng& rng, std::span<double> out) const override {
    parent_.impl().sample(rng, out);
    Eigen::Map<Vec> x(out.data(), dim());
    const Vec base = x - x.dot(u_) * u_;
    const Interval c = bcg::chord(parent_, base, u_);
    x -= c.mid() * u_;
  }

 private:
  ConvexBody parent_;
  Vec u_;
};

class FSymImpl final : public BodyImpl {
 public:
  FSymImpl(ConvexBody parent, const FHyperplane& h, const SymmetrizeOptions& opt)
      : BodyImpl(BodyKind::Symmetrized, parent.field(), parent.n()),
        parent_(std::move(parent)),
        N_(h.real_normal),
        opt_(opt),
        analytic_(parent_.impl().fiber_volume(Vec::Zero(dim()), N_).has_value()) {
    const Vec& c = parent_.impl().bound_center();
    set_bounds(c - N_ * (N_.transpose() * c), parent_.impl().bound_radius());
    pitch_ = parent_.impl().bound_radius() / opt_.grid;
  }

  bool contains(std::span<const double> x) const override {
    const Eigen::Map<const Vec> xv(x.data(), dim());
    const Vec a = N_.transpose() * xv;
    const double r = radius(xv - N_ * a);
    return a.norm() <= r;
  }
  std::optional<Vec> centroid() const override {
    const auto c = parent_.impl().centroid();
    if (!c) return std::nullopt;
    return Vec(*c - N_ * (N_.transpose() * *c));
  }
  std::optional<double> fiber_volume(const Vec& y, const Mat& N) const override {
    // Fibers along the symmetrization normal are centered balls.
    if (N.cols() != N_.cols() || std::abs(std::abs((N_.transpose() * N).determinant()) - 1.0) > 1e-9)
      return std::nullopt;
    const int p = static_cast<int>(N_.cols());
    return kappa(p) * std::pow(radius(y - N_ * (N_.transpose() * y)), p);
  }
  bool direct_sampler() const override { return parent_.impl().direct_sampler(); }
  void sample(Rng& rng, std::span<double> out) const override {
    parent_.impl().sample(rng, out);
    Eigen::Map<Vec> x(out.data(), dim());
    const Vec y = x - N_ * (N_.transpose() * x);
    const int p = static_cast<int>(N_.cols());
    double a[4];
    uniform_in_ball(rng, std::span<double>(a, static_cast<std::size_t>(p)));
    const double r = radius(y);
    x = y + N_ * (r * Eigen::Map<const Vec>(a, p));
  }

  // r(y) for y in H.
  double radius(const Vec& y) const {
    const int p = static_cast<int>(N_.cols());
    const double v = analytic_ ? *parent_.impl().fiber_volume(y, N_) : cached_fiber_volume(y);
    return v > 0.0 ? std::pow(v / kappa(p), 1.0 / p) : 0.0;
  }

 private:
  double cached_fiber_volume(const Vec& y) const {
    std::vector<std::int64_t> key(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) key[static_cast<std::size_t>(i)] = std::llround(y[i] / pitch_);
    {
      const std::lock_guard<std::mutex> lock(mu_);
      const auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Vec yc(dim());
    std::uint64_t h = opt_.seed;
    for (int i = 0; i < dim(); ++i) {
      yc[i] = static_cast<double>(key[static_cast<std::size_t>(i)]) * pitch_;
      h = mix64(h ^ static_cast<std::uint64_t>(key[static_cast<std::size_t>(i)]));
    }
    yc -= N_ * (N_.transpose() * yc);
    const double v = mc_fiber_volume(yc, h);
    const std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::move(key), v);
    return v;
  }

  double mc_fiber_volume(const Vec& y, std::uint64_t seed) const {
    const BodyImpl& k = parent_.impl();
    const int p = static_cast<int>(N_.cols());
    const Vec dc = k.bound_center() - y;
    const Vec a0 = N_.transpose() * dc;
    const double r2 = k.bound_radius() * k.bound_radius() - (dc - N_ * a0).squaredNorm();
    if (r2 <= 0.0) return 0.0;
    const double rho = std::sqrt(r2);
    Rng rng(seed);
    const Vec base = y + N_ * a0;
    const Mat step = rho * N_;
    double a[4];
    Vec x(dim());
    int hits = 0;
    for (int i = 0; i < opt_.fiber_samples; ++i) {
      fiber_point(rng, p, a);
      x = base;
      for (int q = 0; q < p; ++q) x.noalias() += a[q] * step.col(q);
      if (k.contains(as_span(x))) ++hits;
    }
    return kappa(p) * std::pow(rho, p) * hits / opt_.fiber_samples;
  }

  ConvexBody parent_;
  Mat N_;
  SymmetrizeOptions opt_;
  bool analytic_;
  double pitch_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<std::int64_t>, double> cache_;
};

}  // namespace

RealHyperplane RealHyperplane::from_normal(const Vec& u) {
  const double n = u.norm();
  if (!(n > 0.0)) throw InvalidArgument("hyperplane normal must be nonzero");
  return RealHyperplane{u / n};
}

FHyperplane FHyperplane::from_normal(const FVector& nu) {
  const double n = norm(nu);
  if (!(n > 0.0)) throw InvalidArgument("hyperplane normal must be nonzero");
  FHyperplane h;
  h.normal = nu.times(Scalar(nu.field(), 1.0 / n));
  FMat col(nu.field(), nu.size(), 1);
  col.set_column(0, h.normal);
  h.real_normal = real_columns(col);
  return h;
}

ConvexBody steiner(const ConvexBody& k, const RealHyperplane& h) {
  if (h.normal.size() != k.dim()) throw DimensionMismatch("hyperplane normal has wrong dimension");
  return ConvexBody(std::make_shared<SteinerImpl>(k, h.normal));
}

ConvexBody symmetrize_fhyperplane(const ConvexBody& k, const FHyperplane& h, const SymmetrizeOptions& opt) {
  if (h.normal.field() != k.field()) throw FieldMismatch("hyperplane and body over different fields");
  if (h.normal.size() != k.n()) throw DimensionMismatch("hyperplane normal has wrong dimension");
  const EllipsoidForm* e = k.ellipsoid();
  if (e && e->H) {
    // H' = S + h nu nu*, S = H - H nu nu* H / h, h = nu* H nu; center moves
    // to the projection onto nu^perp.
    const Field f = k.field();
    const FMat& form = *e->H;
    FMat nu(f, k.n(), 1);
    nu.set_column(0, h.normal);
    const FMat hnu = form * nu;
    const double hh = re((adjoint(nu) * hnu)(0, 0));
    const FMat s = form + scale(hnu * adjoint(hnu), -1.0 / hh);
    const FMat sym = s + scale(nu * adjoint(nu), hh);
    const FVector c = FVector::from_real(f, std::vector<double>(e->center.data(), e->center.data() + e->center.size()));
    const FVector cy = c - h.normal.times(hermitian_inner(h.normal, c));
    return make_ellipsoid(cy, scale(sym + adjoint(sym), 0.5));
  }
  return ConvexBody(std::make_shared<FSymImpl>(k, h, opt));
}

IterateTrace iterate(const ConvexBody& k, const std::vector<FHyperplane>& planes, int rounds, int n_dirs,
                     std::uint64_t seed, std::uint64_t volume_samples, const SymmetrizeOptions& opt) {
  IterateTrace trace;
  ConvexBody cur = k;
  trace.defects.push_back(roundness_defect(cur, n_dirs, seed));
  trace.volumes.push_back(cur.volume(volume_samples, derive_seed(seed, 0)));
  for (int r = 1; r <= rounds; ++r) {
    for (std::size_t i = 0; i < planes.size(); ++i) {
      SymmetrizeOptions o = opt;
      o.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(r) * 1000 + i);
      cur = symmetrize_fhyperplane(cur, planes[i], o);
    }
    trace.defects.push_back(roundness_defect(cur, n_dirs, seed));
    trace.volumes.push_back(cur.volume(volume_samples, derive_seed(seed, static_cast<std::uint64_t>(r))));
  }
  trace.result = cur;
  return trace;
}

}  // namespace bcg
