#pragma once

// Shared fixtures: quick fields and bundle points used across test suites.

#include <memory>
#include <vector>

#include "cotb/catalog.hpp"
#include "cotb/cotangent.hpp"
#include "cotb/fields.hpp"

namespace cotb_test {

inline std::unique_ptr<cotb::ScalarField> constant_scaling(int n, double c) {
  return cotb::make_scalar_field(
      n, [c](const auto* x) { return std::decay_t<decltype(x[0])>(c); });
}

inline cotb::CotangentPoint bundle_point(std::vector<double> x,
                                         std::vector<double> p) {
  return cotb::CotangentPoint{std::move(x), std::move(p)};
}

}  // namespace cotb_test
