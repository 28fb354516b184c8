#include "bcg/montecarlo.hpp"

#include <algorithm>

namespace bcg {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

void uniform_direction(Rng& rng, std::span<double> out) {
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& v : out) {
      v = standard_normal(rng);
      n2 += v * v;
    }
  } while (n2 == 0.0);
  const double s = 1.0 / std::sqrt(n2);
  for (auto& v : out) v *= s;
}

void uniform_in_ball(Rng& rng, std::span<double> out) {
  uniform_direction(rng, out);
  const double r = std::pow(uniform01(rng), 1.0 / static_cast<double>(out.size()));
  for (auto& v : out) v *= r;
}

double Accumulator::variance() const {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double m = sum / n;
  return std::max(0.0, (sum_sq - n * m * m) / (n - 1.0));
}

double Accumulator::stderr_of_mean() const {
  if (count < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(count));
}

Estimate to_estimate(const Accumulator& acc, std::uint64_t seed, double scale) {
  Estimate e;
  e.mean = acc.mean() * scale;
  e.std_error = acc.stderr_of_mean() * std::abs(scale);
  e.n_samples = acc.count;
  e.seed = seed;
  e.insufficient = e.mean != 0.0 && e.relative_stderr() > kInsufficientRelativeError;
  return e;
}

}  // namespace bcg
