#include <algorithm>
#include <cmath>
#include <limits>

#include "bcg/ball_constants.hpp"
#include "bcg/bodies.hpp"

namespace bcg {

namespace {

constexpr int kScanPoints = 64;
constexpr int kBisections = 60;

bool member_at(const BodyImpl& k, const Vec& base, const Vec& dir, double t) {
  double buf[kMaxDim];
  const int d = k.dim();
  for (int i = 0; i < d; ++i) buf[i] = base[i] + t * dir[i];
  return k.contains(std::span<const double>(buf, static_cast<std::size_t>(d)));
}

// Parameter range where base + t dir meets the bounding ball.
Interval bounding_range(const BodyImpl& k, const Vec& base, const Vec& dir) {
  const Vec dx = base - k.bound_center();
  const double a = dir.squaredNorm();
  if (a == 0.0) return Interval{};
  const double b = dx.dot(dir);
  const double c = dx.squaredNorm() - k.bound_radius() * k.bound_radius();
  const double disc = b * b - a * c;
  if (disc < 0.0) return Interval{};
  const double s = std::sqrt(disc);
  return Interval{(-b - s) / a, (-b + s) / a};
}

Interval numeric_chord(const BodyImpl& k, const Vec& base, const Vec& dir, std::optional<double> inside = std::nullopt) {
  const Interval range = bounding_range(k, base, dir);
  if (range.empty()) return Interval{};
  double t_in = 0.0;
  bool found = false;
  if (inside) {
    t_in = *inside;
    found = true;
  } else {
    for (int i = 0; i < kScanPoints && !found; ++i) {
      const double t = range.lo + (i + 0.5) / kScanPoints * (range.hi - range.lo);
      if (member_at(k, base, dir, t)) {
        t_in = t;
        found = true;
      }
    }
  }
  if (!found) return Interval{};
  double a = range.lo, b = t_in;
  if (member_at(k, base, dir, a)) {
    b = a;
  } else {
    for (int i = 0; i < kBisections; ++i) {
      const double m = 0.5 * (a + b);
      (member_at(k, base, dir, m) ? b : a) = m;
    }
  }
  const double lo = b;
  a = t_in;
  b = range.hi;
  if (member_at(k, base, dir, b)) {
    a = b;
  } else {
    for (int i = 0; i < kBisections; ++i) {
      const double m = 0.5 * (a + b);
      (member_at(k, base, dir, m) ? a : b) = m;
    }
  }
  return Interval{lo, a};
}

Vec random_direction(Rng& rng, int d) {
  Vec u(d);
  uniform_direction(rng, std::span<double>(u.data(), static_cast<std::size_t>(d)));
  return u;
}

}  // namespace

Interval chord(const ConvexBody& k, const Vec& base, const Vec& dir) {
  if (base.size() != k.dim() || dir.size() != k.dim()) throw DimensionMismatch("chord arguments have wrong dimension");
  if (auto c = k.impl().chord(base, dir)) return *c;
  return numeric_chord(k.impl(), base, dir);
}

bool has_analytic_support(const ConvexBody& k) {
  Vec e = Vec::Zero(k.dim());
  e[0] = 1.0;
  return k.impl().support(e).has_value();
}

double support(const ConvexBody& k, const Vec& u, std::uint64_t seed) {
  if (u.size() != k.dim()) throw DimensionMismatch("direction has wrong dimension");
  if (auto h = k.impl().support(u)) return *h;
  // Sampled maximization: best of uniform samples, pushed to the boundary
  // along u, then a shrinking random search over base points.
  Rng rng(derive_seed(seed, 0x73757070));
  const int d = k.dim();
  Vec x(d), best(d);
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2000; ++i) {
    k.impl().sample(rng, std::span<double>(x.data(), static_cast<std::size_t>(d)));
    if (x.dot(u) > best_val) {
      best_val = x.dot(u);
      best = x;
    }
  }
  const double un2 = u.squaredNorm();
  auto push = [&](const Vec& base) {
    const Interval c = chord(k, base, u);
    return c.empty() ? -std::numeric_limits<double>::infinity() : base.dot(u) + c.hi * un2;
  };
  best_val = std::max(best_val, push(best));
  double step = 0.1 * k.impl().bound_radius();
  for (int it = 0; it < 400; ++it) {
    Vec cand = best + step * random_direction(rng, d);
    cand -= (cand - best).dot(u) / un2 * u;
    if (!k.impl().contains(std::span<const double>(cand.data(), static_cast<std::size_t>(d)))) {
      step *= 0.97;
      continue;
    }
    const double v = push(cand);
    if (v > best_val) {
      best_val = v;
      best = cand;
    } else {
      step *= 0.97;
    }
  }
  return best_val;
}

double radial(const ConvexBody& k, const Vec& u) {
  const Vec zero = Vec::Zero(k.dim());
  if (!k.contains(zero)) throw OriginNotInterior("radial function needs the origin inside the body");
  if (auto c = k.impl().chord(zero, u)) return std::max(0.0, c->hi);
  return std::max(0.0, numeric_chord(k.impl(), zero, u, 0.0).hi);
}

double polar_radial(const ConvexBody& k, const Vec& u) {
  const double h = support(k, u);
  if (!(h > 0.0)) throw OriginNotInterior("polar body needs the origin in the interior");
  return 1.0 / h;
}

Estimate polar_volume(const ConvexBody& k, std::uint64_t dirs, std::uint64_t seed, int workers) {
  if (!k.contains(Vec(Vec::Zero(k.dim())))) throw OriginNotInterior("polar body needs the origin in the interior");
  const int d = k.dim();
  const Accumulator acc = parallel_accumulate(dirs, workers, seed, [&](Rng& rng, std::uint64_t quota, Accumulator& a, int) {
    for (std::uint64_t i = 0; i < quota; ++i) {
      const Vec u = random_direction(rng, d);
      const double h = support(k, u);
      if (!(h > 0.0)) throw OriginNotInterior("support function vanishes");
      a.add(std::pow(h, -d));
    }
  });
  return to_estimate(acc, seed, kappa(d));
}

void sample_uniform(const ConvexBody& k, Rng& rng, std::span<double> out) {
  if (static_cast<int>(out.size()) != k.dim()) throw DimensionMismatch("sample buffer has wrong size");
  k.impl().sample(rng, out);
}

Vec sample_uniform(const ConvexBody& k, Rng& rng) {
  Vec x(k.dim());
  k.impl().sample(rng, std::span<double>(x.data(), static_cast<std::size_t>(k.dim())));
  return x;
}

Vec sample_by_rejection(const ConvexBody& k, Rng& rng) {
  Vec x(k.dim());
  k.impl().sample_by_rejection(rng, std::span<double>(x.data(), static_cast<std::size_t>(k.dim())));
  return x;
}

Vec centroid(const ConvexBody& k, std::uint64_t samples, std::uint64_t seed) {
  if (auto c = k.impl().centroid()) return *c;
  Rng rng(derive_seed(seed, 0x63656e74));
  Vec acc = Vec::Zero(k.dim());
  for (std::uint64_t i = 0; i < samples; ++i) acc += sample_uniform(k, rng);
  return acc / static_cast<double>(samples);
}

void right_scale(Field f, std::span<double> x, const Scalar& w) {
  const int p = real_dim(f);
  for (std::size_t i = 0; i < x.size(); i += static_cast<std::size_t>(p)) {
    const Scalar z = mul_unchecked(Scalar::from_components(f, x.subspan(i, static_cast<std::size_t>(p))), w);
    for (int c = 0; c < p; ++c) x[i + static_cast<std::size_t>(c)] = z[c];
  }
}

Scalar random_unit_scalar(Field f, Rng& rng) {
  double c[4] = {0, 0, 0, 0};
  uniform_direction(rng, std::span<double>(c, static_cast<std::size_t>(real_dim(f))));
  return Scalar(f, c[0], c[1], c[2], c[3]);
}

bool unit_scalar_invariance_check(const ConvexBody& k, int trials, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x756e6974));
  const int d = k.dim();
  Vec x(d);
  for (int t = 0; t < trials; ++t) {
    k.impl().sample(rng, std::span<double>(x.data(), static_cast<std::size_t>(d)));
    right_scale(k.field(), std::span<double>(x.data(), static_cast<std::size_t>(d)), random_unit_scalar(k.field(), rng));
    if (!k.impl().contains(std::span<const double>(x.data(), static_cast<std::size_t>(d)))) return false;
  }
  return true;
}

double roundness_defect(const ConvexBody& k, int n_dirs, std::uint64_t seed) {
  const Vec c = centroid(k, 10000, seed);
  Rng rng(derive_seed(seed, 0x726f756e));
  const bool analytic = has_analytic_support(k);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < n_dirs; ++i) {
    const Vec u = random_direction(rng, k.dim());
    double v;
    if (analytic) {
      v = *k.impl().support(u) - c.dot(u);
    } else {
      const Interval ch = chord(k, c, u);
      v = ch.empty() ? 0.0 : std::max(0.0, ch.hi);
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return n_dirs > 0 ? hi - lo : 0.0;
}

LineSectionReport line_section_roundness(const ConvexBody& k, int trials, std::uint64_t seed, int n_dirs) {
  LineSectionReport rep;
  Rng rng(derive_seed(seed, 0x6c696e65));
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vec x0 = sample_uniform(k, rng);
    const Subspace e = Subspace::span_of(random_gaussian(k.field(), k.n(), 1, rng));
    const Vec y = x0 - e.projector() * x0;
    const ConvexBody s = section(k, e, y);
    if (s.kind() == BodyKind::Empty) {
      ++rep.degenerate;
      continue;
    }
    const double d = roundness_defect(s, n_dirs, derive_seed(seed, static_cast<std::uint64_t>(t)));
    rep.max_defect = std::max(rep.max_defect, d);
    sum += d;
    ++rep.sections;
  }
  rep.mean_defect = rep.sections ? sum / rep.sections : 0.0;
  return rep;
}

}  // namespace bcg
