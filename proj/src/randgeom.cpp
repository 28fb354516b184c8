#include "bcg/randgeom.hpp"

#include <cmath>

#include "bcg/ball_constants.hpp"

namespace bcg {

namespace {
constexpr int kGrassmannRetries = 16;
}

Subspace sample_grassmann(int n, int m, Field f, Rng& rng) {
  if (m < 1 || m > n) throw InvalidArgument("grassmannian needs 1 <= m <= n");
  for (int attempt = 0; attempt < kGrassmannRetries; ++attempt) {
    auto q = orthonormalize(random_gaussian(f, n, m, rng));
    if (q) return Subspace::from_basis(*q);
  }
  throw RetryExhausted("gaussian matrix repeatedly rank deficient");
}

double c_constant(int m, int n, int p) {
  if (m < 1 || m >= n) throw InvalidArgument("c constant needs 1 <= m < n");
  double log_c = 0.0;
  for (int j = 0; j < m; ++j) log_c += std::log(omega((n - j) * p)) - std::log(omega((m - j) * p));
  return std::exp(log_c);
}

double b_constant(int m, int n, int p) {
  return std::pow(kappa(n * p), m) / std::pow(kappa(m * p), n) / c_constant(m, n, p);
}

BpResult bp_check(const std::vector<ConvexBody>& bodies, const BpOptions& opt) {
  if (bodies.empty()) throw InvalidArgument("bp_check needs at least one body");
  const int m = static_cast<int>(bodies.size());
  const Field f = bodies.front().field();
  const int n = bodies.front().n();
  const int p = real_dim(f);
  for (const auto& k : bodies) {
    if (k.field() != f) throw FieldMismatch("bodies over different fields");
    if (k.n() != n) throw DimensionMismatch("bodies of different dimension");
    if (!k.contains(Vec::Zero(k.dim()))) throw OriginNotInterior("bp_check needs 0 in every body");
  }
  if (m >= n) throw InvalidArgument("bp_check needs m < n");
  if (opt.inner < 1) throw InvalidArgument("inner sample count must be positive");

  BpResult res;
  double lhs = 1.0, lhs_rel2 = 0.0;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const Estimate v = bodies[i].volume(opt.volume_samples, derive_seed(opt.seed, 1000 + i), opt.workers);
    lhs *= v.mean;
    lhs_rel2 += v.relative_stderr() * v.relative_stderr();
  }
  res.lhs = Estimate{lhs, lhs * std::sqrt(lhs_rel2), 0, opt.seed, false};
  for (const auto& k : bodies)
    if (!k.exact_volume()) res.lhs.n_samples += opt.volume_samples;

  const double c = c_constant(m, n, p);
  const double power = static_cast<double>((n - m) * p);
  const std::uint64_t outer = std::max<std::uint64_t>(2, opt.samples / static_cast<std::uint64_t>(opt.inner));
  const int md = m * p;

  const Accumulator acc = parallel_accumulate(outer, opt.workers, opt.seed, [&](Rng& rng, std::uint64_t quota,
                                                                                 Accumulator& out, int) {
    std::vector<double> x(static_cast<std::size_t>(m * n * p));
    Vec w(md);
    for (std::uint64_t t = 0; t < quota; ++t) {
      const Subspace e = sample_grassmann(n, m, f, rng);
      std::vector<ConvexBody> secs;
      double scale = c;
      bool empty = false;
      for (const auto& k : bodies) {
        secs.push_back(section(k, e, Vec::Zero(k.dim())));
        const BodyImpl& s = secs.back().impl();
        const auto ev = s.exact_volume();
        if (ev && *ev == 0.0) empty = true;
        scale *= (ev && s.direct_sampler()) ? *ev : s.proposal_volume();
      }
      if (empty) {
        out.add(0.0);
        continue;
      }
      double sum = 0.0;
      for (int it = 0; it < opt.inner; ++it) {
        bool inside = true;
        for (int i = 0; i < m && inside; ++i) {
          const BodyImpl& s = secs[static_cast<std::size_t>(i)].impl();
          const std::span<double> ws(w.data(), static_cast<std::size_t>(md));
          if (s.exact_volume() && s.direct_sampler()) {
            s.sample(rng, ws);
          } else {
            s.propose(rng, ws);
            inside = s.contains(ws);
          }
          const Vec xi = e.embed(w);
          std::copy(xi.data(), xi.data() + xi.size(), x.begin() + static_cast<std::ptrdiff_t>(i) * n * p);
        }
        if (!inside) continue;
        sum += std::pow(det_abs_tuple(f, n, m, std::span<const double>(x.data(), static_cast<std::size_t>(m * n * p))),
                        power);
      }
      out.add(scale * sum / opt.inner);
    }
  });
  res.rhs = to_estimate(acc, opt.seed);
  res.rhs.n_samples = acc.count * static_cast<std::uint64_t>(opt.inner);
  return res;
}

}  // namespace bcg
