#include "bcg/quermass.hpp"

#include <cmath>

#include "bcg/ball_constants.hpp"
#include "bcg/randgeom.hpp"

namespace bcg {

namespace {

constexpr int kInvarianceTrials = 2000;
// Keeps the plug-in bias correction small against the outer error.
constexpr std::uint64_t kFractionalInner = 10000;

void check_m(const ConvexBody& k, int m) {
  if (m < 1 || m >= k.n()) throw InvalidArgument("need 1 <= m < n");
}

Comparison compare(const Estimate& lhs, const Estimate& rhs) {
  Comparison c{lhs, rhs, lhs.mean - rhs.mean, std::hypot(lhs.std_error, rhs.std_error), 0.0};
  // Rounding floor so exact sides do not give infinite margins.
  const double floor = 1e-12 * std::max(std::abs(lhs.mean), std::abs(rhs.mean));
  c.margin_sigmas = c.difference / std::max(c.sigma, floor > 0.0 ? floor : 1e-300);
  return c;
}

Estimate scaled(Estimate e, double s) {
  e.mean *= s;
  e.std_error *= std::abs(s);
  return e;
}

// f(v)^a with first-order error propagation.
Estimate power_of(const Estimate& e, double a) {
  Estimate out = e;
  out.mean = std::pow(e.mean, a);
  out.std_error = std::abs(a) * out.mean * e.relative_stderr();
  return out;
}

Estimate body_volume(const ConvexBody& k, const QuermassOptions& opt, std::uint64_t stream) {
  return k.volume(opt.volume_samples, derive_seed(opt.seed, stream), opt.workers);
}

// Projection volume |P_E K| when available in closed form.
class Projector {
 public:
  explicit Projector(const ConvexBody& k, int m) : k_(k), m_(m) {
    if (const EllipsoidForm* e = k.ellipsoid()) {
      qinv_ = e->Qinv;
      ellipsoid_ = true;
      return;
    }
    if (m != 1 || !has_analytic_support(k) || !unit_scalar_invariance_check(k, kInvarianceTrials, 1))
      throw UnsupportedBodyForProjection("projection volume needs an ellipsoid, or m = 1 and a unit-scalar invariant body");
  }

  double operator()(const Subspace& e) const {
    const int p = real_dim(k_.field());
    if (ellipsoid_) {
      const Mat s = e.real_basis.transpose() * qinv_ * e.real_basis;
      return kappa(m_ * p) * std::sqrt(s.determinant());
    }
    // P_E K is the ball of radius h_K(u) for a unit u spanning E.
    const Vec u = e.real_basis.col(0);
    return kappa(p) * std::pow(*k_.impl().support(u), p);
  }

 private:
  const ConvexBody& k_;
  int m_;
  bool ellipsoid_ = false;
  Mat qinv_;
};

}  // namespace

Estimate section_volume(const ConvexBody& k, const Subspace& e, std::uint64_t samples, Rng& rng) {
  const ConvexBody s = section(k, e, Vec::Zero(k.dim()));
  if (auto v = s.exact_volume()) return Estimate::exact(*v);
  if (samples < 2) throw InvalidArgument("section volume needs at least two samples");
  const int md = e.real_dim();
  Accumulator acc;
  Vec w(md);
  if (k.contains(Vec::Zero(k.dim()))) {
    for (std::uint64_t i = 0; i < samples; ++i) {
      uniform_direction(rng, std::span<double>(w.data(), static_cast<std::size_t>(md)));
      acc.add(std::pow(radial(k, e.embed(w)), md));
    }
    return to_estimate(acc, 0, kappa(md));
  }
  const BodyImpl& si = s.impl();
  for (std::uint64_t i = 0; i < samples; ++i) {
    si.propose(rng, std::span<double>(w.data(), static_cast<std::size_t>(md)));
    acc.add(si.contains(std::span<const double>(w.data(), static_cast<std::size_t>(md))) ? 1.0 : 0.0);
  }
  return to_estimate(acc, 0, si.proposal_volume());
}

Estimate dual_affine_quermass(const ConvexBody& k, int m, const QuermassOptions& opt) {
  check_m(k, m);
  if (!k.contains(Vec::Zero(k.dim()))) throw OriginNotInterior("dual quermassintegral needs 0 inside K");
  const int n = k.n();
  const Accumulator acc = parallel_accumulate(opt.outer, opt.workers, opt.seed,
                                              [&](Rng& rng, std::uint64_t quota, Accumulator& out, int) {
    for (std::uint64_t t = 0; t < quota; ++t) {
      const Subspace e = sample_grassmann(n, m, k.field(), rng);
      double prod = 1.0;
      for (int j = 0; j < n; ++j) {
        const Estimate v = section_volume(k, e, opt.inner, rng);
        if (v.is_exact()) {
          prod = std::pow(v.mean, n);
          break;
        }
        prod *= v.mean;
      }
      out.add(prod);
    }
  });
  Estimate r = to_estimate(acc, opt.seed);
  r.n_samples = acc.count;
  return r;
}

Estimate affine_quermass(const ConvexBody& k, int m, const QuermassOptions& opt) {
  check_m(k, m);
  const Projector proj(k, m);
  const int n = k.n();
  const Accumulator acc = parallel_accumulate(opt.outer, opt.workers, opt.seed,
                                              [&](Rng& rng, std::uint64_t quota, Accumulator& out, int) {
    for (std::uint64_t t = 0; t < quota; ++t) out.add(std::pow(proj(sample_grassmann(n, m, k.field(), rng)), -n));
  });
  return to_estimate(acc, opt.seed);
}

Comparison sl_invariance_test(const ConvexBody& k, int m, const FMat& g, bool dual, const QuermassOptions& opt) {
  if (std::abs(det_abs(g).value - 1.0) > 1e-9) throw NotUnimodular("transform must have |det| = 1");
  const ConvexBody gk = affine_image(k, g);
  QuermassOptions o1 = opt, o2 = opt;
  o1.seed = derive_seed(opt.seed, 1);
  o2.seed = derive_seed(opt.seed, 2);
  const Estimate a = dual ? dual_affine_quermass(k, m, o1) : affine_quermass(k, m, o1);
  const Estimate b = dual ? dual_affine_quermass(gk, m, o2) : affine_quermass(gk, m, o2);
  return compare(a, b);
}

Comparison intersection_inequality_check(const std::vector<ConvexBody>& bodies, const QuermassOptions& opt) {
  if (bodies.empty()) throw InvalidArgument("need at least one body");
  const int m = static_cast<int>(bodies.size());
  const Field f = bodies.front().field();
  const int n = bodies.front().n();
  const int p = real_dim(f);
  for (const auto& k : bodies) {
    if (k.field() != f) throw FieldMismatch("bodies over different fields");
    if (k.n() != n) throw DimensionMismatch("bodies of different dimension");
    if (!k.contains(Vec::Zero(k.dim()))) throw OriginNotInterior("intersection inequality needs 0 inside each body");
  }
  if (m >= n) throw InvalidArgument("need m < n");

  Estimate lhs = Estimate::exact(1.0);
  double rel2 = 0.0;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const Estimate v = body_volume(bodies[i], opt, 3000 + i);
    lhs.mean *= v.mean;
    rel2 += v.relative_stderr() * v.relative_stderr();
    lhs.n_samples += v.n_samples;
  }
  lhs.std_error = lhs.mean * std::sqrt(rel2);

  const bool integral = n % m == 0;
  const int reps = integral ? n / m : 1;
  const double alpha = static_cast<double>(n) / m;
  const Accumulator acc = parallel_accumulate(opt.outer, opt.workers, opt.seed,
                                              [&](Rng& rng, std::uint64_t quota, Accumulator& out, int) {
    for (std::uint64_t t = 0; t < quota; ++t) {
      const Subspace e = sample_grassmann(n, m, f, rng);
      double prod = 1.0;
      for (const auto& k : bodies) {
        if (integral) {
          for (int j = 0; j < reps; ++j) {
            const Estimate v = section_volume(k, e, opt.inner, rng);
            if (v.is_exact()) {
              prod *= std::pow(v.mean, reps - j);
              break;
            }
            prod *= v.mean;
          }
        } else {
          // Plug-in power with the second-order log-normal bias correction.
          const Estimate v = section_volume(k, e, std::max<std::uint64_t>(opt.inner, kFractionalInner), rng);
          const double s = v.relative_stderr();
          prod *= std::pow(v.mean, alpha) * std::exp(-0.5 * alpha * (alpha - 1.0) * s * s);
        }
      }
      out.add(prod);
    }
  });
  Estimate rhs = to_estimate(acc, opt.seed, std::pow(kappa(n * p), m) / std::pow(kappa(m * p), n));
  return compare(lhs, rhs);
}

SantaloReport santalo_case(const ConvexBody& k, const QuermassOptions& opt) {
  if (!unit_scalar_invariance_check(k, kInvarianceTrials, opt.seed))
    throw NotUnitScalarInvariant("body is not invariant under unit scalars");
  if (!k.contains(Vec::Zero(k.dim()))) throw OriginNotInterior("santalo case needs 0 inside K");
  const int n = k.n();
  const int p = real_dim(k.field());
  const double knp = kappa(n * p);

  // E_E h(u_E)^{-np} = (kappa_p)^n int |P_E K|^{-n} dE.
  const Estimate proj = affine_quermass(k, 1, opt);
  const Estimate affine_side = scaled(proj, std::pow(kappa(p), n));

  QuermassOptions po = opt;
  po.seed = derive_seed(opt.seed, 0x706f6c);
  const Estimate polar = polar_volume(k, opt.outer, po.seed, opt.workers);

  SantaloReport r;
  r.identity = compare(affine_side, scaled(polar, 1.0 / knp));
  const Estimate vol = body_volume(k, opt, 0x766f6c);
  r.volume = vol.mean;
  r.polar_volume = polar.mean;
  r.inequality = compare(power_of(vol, -1.0), scaled(affine_side, 1.0 / knp));
  return r;
}

ConjectureReport conjecture_eval(const ConvexBody& k, int m, const QuermassOptions& opt) {
  check_m(k, m);
  const Projector proj(k, m);
  const int n = k.n();
  const int p = real_dim(k.field());
  struct Pair {
    Accumulator inv, direct;
  };
  std::vector<Pair> parts(static_cast<std::size_t>(std::max(1, opt.workers)));
  parallel_accumulate(opt.outer, opt.workers, opt.seed, [&](Rng& rng, std::uint64_t quota, Accumulator&, int w) {
    Pair& part = parts[static_cast<std::size_t>(w)];
    for (std::uint64_t t = 0; t < quota; ++t) {
      const double v = proj(sample_grassmann(n, m, k.field(), rng));
      part.inv.add(std::pow(v, -n));
      part.direct.add(v);
    }
  });
  Pair all;
  for (const auto& pt : parts) {
    all.inv.merge(pt.inv);
    all.direct.merge(pt.direct);
  }
  const Estimate vol = body_volume(k, opt, 0x636f6e);
  const double knp = kappa(n * p), kmp = kappa(m * p);

  ConjectureReport r;
  r.conj = compare(power_of(vol, -m), to_estimate(all.inv, opt.seed, std::pow(kmp, n) / std::pow(knp, m)));
  r.iso = compare(to_estimate(all.direct, opt.seed, std::pow(knp, static_cast<double>(m) / n) / kmp),
                  power_of(vol, static_cast<double>(m) / n));
  return r;
}

}  // namespace bcg
