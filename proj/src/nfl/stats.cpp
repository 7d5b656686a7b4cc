#include "pacnfl/stats.hpp"

#include <algorithm>

#include <boost/math/special_functions/beta.hpp>

#include "pacnfl/error.hpp"

namespace pacnfl {

Interval clopper_pearson(double x, std::uint64_t n, double confidence) {
  if (n == 0) throw Error(Errc::EmptyEstimate, "confidence interval from zero trials");
  if (!(confidence > 0 && confidence < 1)) throw Error(Errc::BadRange, "confidence must lie in (0,1)");
  const double nd = static_cast<double>(n);
  x = std::clamp(x, 0.0, nd);
  const double alpha = 1 - confidence;
  Interval r;
  r.lo = x <= 0 ? 0.0 : boost::math::ibeta_inv(x, nd - x + 1, alpha / 2);
  r.hi = x >= nd ? 1.0 : boost::math::ibeta_inv(x + 1, nd - x, 1 - alpha / 2);
  return r;
}

Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
  if (k > n) throw Error(Errc::BadRange, "more successes than trials");
  return clopper_pearson(static_cast<double>(k), n, confidence);
}

}  // namespace pacnfl
