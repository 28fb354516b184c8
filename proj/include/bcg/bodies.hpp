#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bcg/montecarlo.hpp"
#include "bcg/ncla.hpp"
#include "bcg/subspace.hpp"

namespace bcg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Largest supported real ambient dimension n p.
constexpr int kMaxDim = 64;
// Consecutive rejections before sampling gives up.
constexpr std::uint64_t kRejectionBudget = 1000000;

enum class BodyKind { Ball, Ellipsoid, Box, VPolytope, AffineImage, Section, Symmetrized, OracleOnly, L1Ball, Empty };
std::string_view kind_name(BodyKind k);

// Parameter range {t : base + t dir in K}. Empty when lo > hi.
struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return !(lo <= hi); }
  double length() const { return empty() ? 0.0 : hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

// {x : (x - c)^T Q (x - c) <= 1} in real coordinates, optionally with the
// F-hermitian form H whose realification is Q.
struct EllipsoidForm {
  Vec center;
  Mat Q;
  Mat Qinv;
  Mat sampler;  // L^{-T} with Q = L L^T
  double volume = 0.0;
  std::optional<FMat> H;
};

// Restriction of an ellipsoid to the affine subspace y + N w (N with
// orthonormal columns): {w : (w - w0)^T G (w - w0) <= rho}.
struct RestrictedForm {
  Mat G;
  Vec w0;
  double rho = 0.0;
  double volume() const;
};
RestrictedForm restrict_ellipsoid(const EllipsoidForm& e, const Vec& y, const Mat& N);

class BodyImpl {
 public:
  BodyImpl(BodyKind kind, Field f, int n);
  virtual ~BodyImpl() = default;

  BodyKind kind() const { return kind_; }
  Field field() const { return field_; }
  int n() const { return n_; }
  int dim() const { return dim_; }
  // The body lies in the ball (bound_center, bound_radius).
  const Vec& bound_center() const { return bound_center_; }
  double bound_radius() const { return bound_radius_; }
  const std::optional<std::pair<Vec, Vec>>& bounding_box() const { return box_; }

  virtual bool contains(std::span<const double> x) const = 0;
  virtual std::optional<double> exact_volume() const { return std::nullopt; }
  virtual std::optional<double> support(const Vec& /*u*/) const { return std::nullopt; }
  virtual std::optional<Vec> centroid() const { return std::nullopt; }
  virtual std::optional<Interval> chord(const Vec& /*base*/, const Vec& /*dir*/) const { return std::nullopt; }
  // Volume of {a in R^p : y + N a in K}; N has p orthonormal columns.
  virtual std::optional<double> fiber_volume(const Vec& /*y*/, const Mat& /*N*/) const { return std::nullopt; }
  virtual const EllipsoidForm* ellipsoid() const { return nullptr; }
  // True when sample() is exact and cheaper than rejection.
  virtual bool direct_sampler() const { return false; }
  virtual void sample(Rng& rng, std::span<double> out) const { sample_by_rejection(rng, out); }

  // Uniform proposal from the bounding box or ball, whichever is smaller.
  void sample_by_rejection(Rng& rng, std::span<double> out) const;
  // Volume of the rejection proposal region.
  double proposal_volume() const;
  void propose(Rng& rng, std::span<double> out) const;

 protected:
  void set_bounds(Vec center, double radius);
  void set_box(Vec lo, Vec hi);

 private:
  BodyKind kind_;
  Field field_;
  int n_;
  int dim_;
  Vec bound_center_;
  double bound_radius_ = 0.0;
  std::optional<std::pair<Vec, Vec>> box_;
};

// Immutable handle; copies share the representation.
class ConvexBody {
 public:
  ConvexBody() = default;
  explicit ConvexBody(std::shared_ptr<const BodyImpl> impl);

  const BodyImpl& impl() const { return *impl_; }
  const std::shared_ptr<const BodyImpl>& ptr() const { return impl_; }
  bool valid() const { return impl_ != nullptr; }

  BodyKind kind() const { return impl_->kind(); }
  Field field() const { return impl_->field(); }
  int n() const { return impl_->n(); }
  int dim() const { return impl_->dim(); }
  // Radius of a ball about the origin containing the body.
  double bounding_radius() const;

  bool contains(std::span<const double> x) const;
  bool contains(const Vec& x) const { return contains(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))); }
  bool contains(const FVector& x) const;
  std::optional<double> exact_volume() const { return impl_->exact_volume(); }
  // Exact when known, otherwise rejection Monte Carlo with binomial stderr.
  Estimate volume(std::uint64_t samples, std::uint64_t seed, int workers = 1) const;
  const EllipsoidForm* ellipsoid() const { return impl_->ellipsoid(); }

 private:
  std::shared_ptr<const BodyImpl> impl_;
};

ConvexBody make_ball(Field f, int n, const Vec& center, double r);
ConvexBody make_unit_ball(Field f, int n);
// {x : <x - a, H (x - a)> <= 1} with H hermitian positive definite.
ConvexBody make_ellipsoid(const FVector& a, const FMat& H);
// Real quadratic form Q (symmetric positive definite) in real coordinates.
ConvexBody make_real_ellipsoid(Field f, int n, const Vec& center, const Mat& Q);
ConvexBody make_box(Field f, int n, const Vec& lo, const Vec& hi);
// Convex hull of points given in real coordinates; must be full-dimensional.
ConvexBody make_vpolytope(Field f, int n, const std::vector<Vec>& vertices);
// {sum_i |z_i| <= r}.
ConvexBody make_l1_ball(Field f, int n, double r);
ConvexBody make_oracle(Field f, int n, std::function<bool(std::span<const double>)> member, const Vec& center,
                       double radius);
// {A x + b : x in K}; A invertible.
ConvexBody affine_image(const ConvexBody& k, const FMat& a, const FVector& b);
ConvexBody affine_image(const ConvexBody& k, const FMat& a);
// K meets y + E, in E-coordinates (real dimension m p).
ConvexBody section(const ConvexBody& k, const Subspace& e, const Vec& y);

// Chord of K along base + t dir: analytic when available, else a 64-point
// scan and 60 bisection steps per end.
Interval chord(const ConvexBody& k, const Vec& base, const Vec& dir);

// h_K(u). Analytic when available, else approximate by sampled maximization.
double support(const ConvexBody& k, const Vec& u, std::uint64_t seed = 1);
bool has_analytic_support(const ConvexBody& k);
// Largest t with t u in K; needs 0 interior.
double radial(const ConvexBody& k, const Vec& u);
double polar_radial(const ConvexBody& k, const Vec& u);
// |K*| as kappa_d times the sphere average of h_K^{-d}.
Estimate polar_volume(const ConvexBody& k, std::uint64_t dirs, std::uint64_t seed, int workers = 1);

// Throws RejectionBudgetExceeded after kRejectionBudget consecutive misses.
Vec sample_uniform(const ConvexBody& k, Rng& rng);
void sample_uniform(const ConvexBody& k, Rng& rng, std::span<double> out);
Vec sample_by_rejection(const ConvexBody& k, Rng& rng);

// Exact centroid when known, else the mean of `samples` uniform points.
Vec centroid(const ConvexBody& k, std::uint64_t samples = 10000, std::uint64_t seed = 1);

// Multiplies each entry of x (real coordinates) on the right by w.
void right_scale(Field f, std::span<double> x, const Scalar& w);
Scalar random_unit_scalar(Field f, Rng& rng);
bool unit_scalar_invariance_check(const ConvexBody& k, int trials, std::uint64_t seed);

// max - min over n_dirs random directions of h_{K - c}(u), c the centroid.
// Bodies without analytic support use the radial function about c instead.
double roundness_defect(const ConvexBody& k, int n_dirs, std::uint64_t seed);

struct LineSectionReport {
  double max_defect = 0.0;
  double mean_defect = 0.0;
  int sections = 0;
  int degenerate = 0;
};
// Random affine F-lines through uniform points of K.
LineSectionReport line_section_roundness(const ConvexBody& k, int trials, std::uint64_t seed, int n_dirs = 360);

}  // namespace bcg
