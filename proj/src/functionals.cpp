#include "bcg/functionals.hpp"

#include <cmath>
#include <map>

#include "bcg/ball_constants.hpp"

namespace bcg {

namespace {

struct VolumeTable {
  // Distinct bodies with their multiplicity in the product.
  std::vector<std::pair<Estimate, int>> entries;
  double product = 1.0;
  double rel_var = 0.0;  // of the product
};

VolumeTable volumes(const std::vector<ConvexBody>& bodies, const FunctionalOptions& opt) {
  std::map<const BodyImpl*, std::size_t> seen;
  VolumeTable t;
  for (const auto& k : bodies) {
    const auto [it, fresh] = seen.emplace(&k.impl(), t.entries.size());
    if (fresh) {
      const Estimate v = k.volume(opt.volume_samples, derive_seed(opt.seed, 7000 + t.entries.size()), opt.workers);
      if (!(v.mean > 0.0)) throw InvalidArgument("body has zero volume");
      t.entries.push_back({v, 1});
    } else {
      ++t.entries[it->second].second;
    }
  }
  for (const auto& [v, k] : t.entries) {
    t.product *= std::pow(v.mean, k);
    t.rel_var += k * k * v.relative_stderr() * v.relative_stderr();
  }
  return t;
}

void check_family(const std::vector<ConvexBody>& bodies) {
  if (bodies.empty()) throw InvalidArgument("need at least one body");
  for (const auto& k : bodies) {
    if (k.field() != bodies.front().field()) throw FieldMismatch("bodies over different fields");
    if (k.n() != bodies.front().n()) throw DimensionMismatch("bodies of different dimension");
  }
}

Estimate finish(const Accumulator& acc, const VolumeTable& vt, std::uint64_t seed) {
  const double m = acc.mean();
  Estimate e;
  e.mean = vt.product * m;
  const double sm = acc.stderr_of_mean();
  e.std_error = std::sqrt(std::pow(vt.product * sm, 2) + e.mean * e.mean * vt.rel_var);
  e.n_samples = acc.count;
  e.seed = seed;
  e.insufficient = e.mean != 0.0 && e.relative_stderr() > kInsufficientRelativeError;
  return e;
}

}  // namespace

Weight Weight::power(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("power weight needs r >= 0");
  Weight w;
  w.r_ = r;
  return w;
}

Weight Weight::custom(std::function<double(double)> phi) {
  if (!phi) throw InvalidArgument("custom weight is empty");
  double prev = phi(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double v = phi(0.01 * i);
    if (!(v > prev)) throw InvalidArgument("custom weight is not strictly increasing");
    prev = v;
  }
  Weight w;
  w.power_ = false;
  w.r_ = 0.0;
  w.phi_ = std::move(phi);
  return w;
}

namespace {

struct BRaw {
  Accumulator acc;
  VolumeTable vt;
};

BRaw b_raw(const std::vector<ConvexBody>& bodies, const Weight& phi, const FunctionalOptions& opt) {
  check_family(bodies);
  const int n = bodies.front().n();
  const Field f = bodies.front().field();
  if (static_cast<int>(bodies.size()) != n) throw DimensionMismatch("B needs exactly n bodies in F^n");
  const int d = bodies.front().dim();
  BRaw out{{}, volumes(bodies, opt)};
  out.acc = parallel_accumulate(opt.samples, opt.workers, opt.seed,
                                [&](Rng& rng, std::uint64_t quota, Accumulator& acc, int) {
    std::vector<double> x(static_cast<std::size_t>(n * d));
    for (std::uint64_t s = 0; s < quota; ++s) {
      for (int i = 0; i < n; ++i)
        sample_uniform(bodies[static_cast<std::size_t>(i)], rng,
                       std::span<double>(x.data() + static_cast<std::ptrdiff_t>(i) * d, static_cast<std::size_t>(d)));
      acc.add(phi(det_abs_tuple(f, n, n, x)));
    }
  });
  return out;
}

}  // namespace

Estimate B_functional(const std::vector<ConvexBody>& bodies, const Weight& phi, const FunctionalOptions& opt) {
  const BRaw raw = b_raw(bodies, phi, opt);
  return finish(raw.acc, raw.vt, opt.seed);
}

double B_balls_exact(int n, int p, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("B_balls_exact needs r >= 0");
  double log_b = n * std::log(kappa(n * p + r));
  for (int j = 0; j < n; ++j) log_b += std::log(omega((n - j) * p)) - std::log(omega((n - j) * p + r));
  return std::exp(log_b);
}

Estimate M_functional(const std::vector<ConvexBody>& bodies, const Weight& phi,
                      const std::optional<std::vector<Scalar>>& lambda, const FunctionalOptions& opt) {
  check_family(bodies);
  const Field f = bodies.front().field();
  const int p = real_dim(f);
  if (bodies.front().n() != 1) throw DimensionMismatch("M takes bodies in F");
  const std::size_t m = bodies.size();
  std::vector<Scalar> l(m, Scalar::one(f));
  if (lambda) {
    if (lambda->size() != m) throw DimensionMismatch("one lambda per body");
    for (const auto& s : *lambda)
      if (s.field != f) throw FieldMismatch("lambda over a different field");
    l = *lambda;
  }
  const VolumeTable vt = volumes(bodies, opt);
  const Accumulator acc = parallel_accumulate(opt.samples, opt.workers, opt.seed,
                                              [&](Rng& rng, std::uint64_t quota, Accumulator& out, int) {
    double x[4];
    for (std::uint64_t s = 0; s < quota; ++s) {
      Scalar sum = Scalar::zero(f);
      for (std::size_t i = 0; i < m; ++i) {
        sample_uniform(bodies[i], rng, std::span<double>(x, static_cast<std::size_t>(p)));
        sum = sum + Scalar::from_components(f, std::span<const double>(x, static_cast<std::size_t>(p))) * l[i];
      }
      out.add(phi(norm(sum)));
    }
  });
  return finish(acc, vt, opt.seed);
}

BrsGap brs_gap(const std::vector<ConvexBody>& bodies, const Weight& phi, const FunctionalOptions& opt) {
  if (!phi.is_power()) throw InvalidArgument("brs_gap needs a power weight");
  check_family(bodies);
  const int n = bodies.front().n();
  const int p = real_dim(bodies.front().field());
  const double r = phi.exponent();
  const double np = static_cast<double>(n * p);

  BrsGap g;
  const BRaw raw = b_raw(bodies, phi, opt);
  g.B_K = finish(raw.acc, raw.vt, opt.seed);
  // x_i = rho_i y_i turns the unit-ball value into prod rho_i^{np + r}.
  g.B_balls = B_balls_exact(n, p, r);
  for (const auto& [v, k] : raw.vt.entries) g.B_balls *= std::pow(v.mean / kappa(np), k * (1.0 + r / np));
  g.gap = g.B_K.mean - g.B_balls;

  // Delta method in log m and log V_j; the volumes enter both terms.
  const double mp = g.B_K.mean;
  double var = std::pow(raw.vt.product * raw.acc.stderr_of_mean(), 2);
  for (const auto& [v, k] : raw.vt.entries) {
    const double d = k * mp - k * (1.0 + r / np) * g.B_balls;
    var += std::pow(d * v.relative_stderr(), 2);
  }
  g.sigma = std::sqrt(var);
  return g;
}

}  // namespace bcg
