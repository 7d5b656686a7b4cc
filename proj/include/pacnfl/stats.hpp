#pragma once

#include <cstdint>

namespace pacnfl {

struct Interval {
  double lo = 0;
  double hi = 1;
};

/// Two-sided Clopper-Pearson interval for k successes in n trials.
Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95);

/// Same construction with a fractional success count (used for mean
/// errors in [0,1]); reduces to the exact interval for integer x.
Interval clopper_pearson(double x, std::uint64_t n, double confidence = 0.95);

}  // namespace pacnfl
