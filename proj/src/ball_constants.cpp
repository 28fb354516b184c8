#include "bcg/ball_constants.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "bcg/errors.hpp"

namespace bcg {

double kappa(double d) {
  if (d < 0.0) throw InvalidArgument("ball dimension must be nonnegative");
  return std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0));
}

double omega(double d) { return d * kappa(d); }

namespace {

constexpr int kTable = 128;

struct Tables {
  std::array<double, kTable> k{};
  std::array<double, kTable> w{};
  Tables() {
    for (int d = 0; d < kTable; ++d) {
      k[static_cast<std::size_t>(d)] = bcg::kappa(d);
      w[static_cast<std::size_t>(d)] = bcg::omega(d);
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

double BallConstants::kappa(int d) {
  if (d >= 0 && d < kTable) return tables().k[static_cast<std::size_t>(d)];
  return bcg::kappa(static_cast<double>(d));
}

double BallConstants::omega(int d) {
  if (d >= 0 && d < kTable) return tables().w[static_cast<std::size_t>(d)];
  return bcg::omega(static_cast<double>(d));
}

}  // namespace bcg
