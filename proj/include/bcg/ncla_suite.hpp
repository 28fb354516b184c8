#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcg/scalars.hpp"

namespace bcg {

struct PropertyResult {
  std::string name;
  double max_rel_error = 0.0;
  int checks = 0;
  bool passed = true;
};

// Randomized determinant identities on `trials` matrices of size 1..max_n:
// multiplicativity, adjoint, row swap, realification, right multiplication
// operator, row expansion and its minor magnitudes.
std::vector<PropertyResult> ncla_property_suite(Field f, int trials, std::uint64_t seed, int max_n = 6,
                                                double tol = 1e-8);

}  // namespace bcg
