#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace bcg {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

double uniform01(Rng& rng);
double standard_normal(Rng& rng);
// Uniform point on the unit sphere S^{d-1}, d = out.size().
void uniform_direction(Rng& rng, std::span<double> out);
// Uniform point in the unit ball B^d, d = out.size().
void uniform_in_ball(Rng& rng, std::span<double> out);

// Monte Carlo result. Exact values carry stderr 0 and n_samples 0.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  // Set when std_error / mean exceeds 5%.
  bool insufficient = false;

  static Estimate exact(double value) { return Estimate{value, 0.0, 0, 0, false}; }
  double relative_stderr() const { return mean != 0.0 ? std_error / std::abs(mean) : 0.0; }
  bool is_exact() const { return n_samples == 0 && std_error == 0.0; }
};

constexpr double kInsufficientRelativeError = 0.05;

// Running sum and sum of squares.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  void merge(const Accumulator& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double variance() const;
  double stderr_of_mean() const;
};

// Mean of the accumulated values times `scale`, with seed and sample count.
Estimate to_estimate(const Accumulator& acc, std::uint64_t seed, double scale = 1.0);

struct McConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
};

// Splits `total` draws into fixed per-worker quotas. Worker w gets its own RNG
// seeded with derive_seed(seed, w) and calls fn(rng, quota, acc, w). Partial
// accumulators are merged in worker order, so the result depends only on
// (seed, workers).
template <class Fn>
Accumulator parallel_accumulate(std::uint64_t total, int workers, std::uint64_t seed, Fn&& fn) {
  if (workers < 1) workers = 1;
  const auto w = static_cast<std::uint64_t>(workers);
  std::vector<Accumulator> parts(w);
  auto quota = [&](std::uint64_t k) { return total / w + (k < total % w ? 1 : 0); };
  if (workers == 1) {
    Rng rng(derive_seed(seed, 0));
    fn(rng, total, parts[0], 0);
    return parts[0];
  }
  std::vector<std::jthread> pool;
  pool.reserve(w);
  for (std::uint64_t k = 0; k < w; ++k) {
    pool.emplace_back([&, k] {
      Rng rng(derive_seed(seed, k));
      fn(rng, quota(k), parts[k], static_cast<int>(k));
    });
  }
  pool.clear();
  Accumulator total_acc;
  for (const auto& p : parts) total_acc.merge(p);
  return total_acc;
}

}  // namespace bcg
