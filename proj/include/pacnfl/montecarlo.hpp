#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pacnfl/family.hpp"
#include "pacnfl/learner.hpp"
#include "pacnfl/sample.hpp"
#include "pacnfl/stats.hpp"

namespace pacnfl {

struct McOptions {
  /// A trial fails when its loss exceeds the threshold; no threshold means
  /// failures are not counted.
  std::optional<Rational> threshold;
  /// Ordinals to use as targets; empty means every member.
  std::vector<BigInt> targets;
  double confidence = 0.95;
  unsigned jobs = 1;
  std::uint64_t budget = kDefaultBudget;
};

struct MemberRisk {
  BigInt ordinal;
  std::uint64_t trials = 0;
  Rational loss_sum;
  double mean = 0;
  Interval mean_ci;
  std::uint64_t failures = 0;
  Interval failure_ci;
};

struct RiskEstimate {
  std::uint64_t m = 0;
  std::uint64_t trials = 0;
  std::vector<MemberRisk> members;
  double average = 0;
  double max = 0;
};

/// Trial t on target i draws from stream rng.derive(i).at(t).
RiskEstimate mc_risk(const ClassHandle& cls, const Learner& learner, std::uint64_t m, std::uint64_t trials,
                     const RngStream& rng, const McOptions& opt = {});

struct EstimateProtocol {
  Rational eps;
  Rational delta;
  std::uint64_t trials = 200;
  std::uint64_t m_min = 1;
  std::uint64_t m_max = std::uint64_t{1} << 16;
  std::uint64_t max_targets = 64;
  double confidence = 0.95;
  unsigned jobs = 1;
  std::uint64_t budget = kDefaultBudget;
  /// Class against which opt is measured; absent means realizable (opt 0).
  std::optional<ClassHandle> benchmark;
  /// Explicit target ordinals; empty means all members, or a seeded subset
  /// of max_targets when the class is larger.
  std::vector<BigInt> targets;
};

struct GridProbe {
  std::uint64_t m = 0;
  std::uint64_t failures = 0;  // worst target
  double ucb = 0;              // worst target
  BigInt worst_target;
  bool pass = false;
};

struct CurvePoint {
  Rational eps;
  Rational delta;
  std::uint64_t m_hat = 0;
  /// Largest probed m that failed (0 when m_min already passed).
  std::uint64_t bracket_lo = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;  // worst target at m_hat
  double ucb = 0;              // worst target at m_hat
  BigInt worst_target;
  std::vector<BigInt> targets;
  std::vector<GridProbe> probes;
};

/// Seeded subset of k distinct ordinals of [0, n), ascending.
std::vector<BigInt> choose_targets(const BigInt& n, std::uint64_t k, const RngStream& rng);

/// Smallest m on a doubling-then-bisection grid at which every tested
/// target has upper confidence bound <= delta on Pr[loss > alpha opt + eps].
/// Throws SearchBoundExceeded when m_max fails.
CurvePoint estimate_m(const ClassHandle& cls, const Learner& learner, const EstimateProtocol& protocol,
                      const RngStream& rng);

}  // namespace pacnfl
