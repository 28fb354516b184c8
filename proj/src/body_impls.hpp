#pragma once

// Concrete body representations shared between the body sources.

#include <functional>
#include <vector>

#include "bcg/bodies.hpp"

namespace bcg::detail {

// Volume of {a in R^p : normals (y + N a) <= offsets} for p <= 2, by
// clipping the square of half-width `radius` about a0. nullopt for p > 2.
std::optional<double> halfspace_fiber_volume(const Mat& normals, const Vec& offsets, const Vec& y, const Mat& N,
                                             const Vec& a0, double radius);

class EllipsoidImpl final : public BodyImpl {
 public:
  EllipsoidImpl(BodyKind kind, Field f, int n, const Vec& center, const Mat& Q, std::optional<FMat> H);

  bool contains(std::span<const double> x) const override;
  std::optional<double> exact_volume() const override { return form_.volume; }
  std::optional<double> support(const Vec& u) const override;
  std::optional<Vec> centroid() const override { return form_.center; }
  std::optional<Interval> chord(const Vec& base, const Vec& dir) const override;
  std::optional<double> fiber_volume(const Vec& y, const Mat& N) const override;
  const EllipsoidForm* ellipsoid() const override { return &form_; }
  bool direct_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override;

 private:
  EllipsoidForm form_;
};

class PolytopeImpl final : public BodyImpl {
 public:
  PolytopeImpl(Field f, int n, std::vector<Vec> vertices);

  bool contains(std::span<const double> x) const override;
  std::optional<double> exact_volume() const override { return volume_; }
  std::optional<double> support(const Vec& u) const override;
  std::optional<Vec> centroid() const override { return centroid_; }
  std::optional<Interval> chord(const Vec& base, const Vec& dir) const override;
  std::optional<double> fiber_volume(const Vec& y, const Mat& N) const override;
  bool direct_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override;

  const std::vector<Vec>& vertices() const { return vertices_; }
  std::size_t facet_count() const { return static_cast<std::size_t>(normals_.rows()); }
  std::size_t simplex_count() const { return simplices_.size(); }

 private:
  std::vector<Vec> vertices_;
  Mat normals_;  // one facet normal per row
  Vec offsets_;  // normals_ x <= offsets_
  std::vector<Mat> simplices_;  // d+1 columns each
  std::vector<double> cumulative_;  // cumulative simplex volumes
  double volume_ = 0.0;
  Vec centroid_;
};

class EmptyImpl final : public BodyImpl {
 public:
  EmptyImpl(Field f, int n);
  bool contains(std::span<const double>) const override { return false; }
  std::optional<double> exact_volume() const override { return 0.0; }
  std::optional<Interval> chord(const Vec&, const Vec&) const override { return Interval{}; }
  void sample(Rng&, std::span<double>) const override;
};

}  // namespace bcg::detail
