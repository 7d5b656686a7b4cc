#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pacnfl/family.hpp"
#include "pacnfl/learner.hpp"

namespace pacnfl {

inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

struct ExactOptions {
  /// Upper limit on (members) x (alphabet)^m.
  std::uint64_t budget = kEnumerationBudget;
  unsigned jobs = 1;
};

/// Number of length-m sequences over the family's sample alphabet (every
/// atom or labeled point some member can produce).
BigInt sequence_count(const ClassHandle& family, std::uint64_t m);

/// (1 / 2T) sum_i sum_j q_i^m(S_j) d(q_i, f_j(q_i)) over all length-m
/// sequences S_j, where d is TV (distribution task) or the least combined
/// loss any output pays on the pair (classification, real-valued).
Rational symmetrized_lower_bound(const ClassHandle& family, std::uint64_t m, const ExactOptions& opt = {});

struct LearnerRisk {
  std::string learner;
  std::vector<Rational> expected;  // per member
  std::vector<Rational> tail;      // per member, Pr[loss >= threshold]
  Rational average;
  Rational max;
  Rational tail_average;
  Rational tail_max;
  /// markov_reverse(average, threshold) and markov_reverse(max, threshold)
  Rational markov_average;
  Rational markov_max;
};

struct ExactOracleReport {
  Task task = Task::Distribution;
  Rational eta;
  std::uint64_t points = 0;
  std::optional<std::uint64_t> filter;
  std::uint64_t m = 0;
  std::uint64_t members = 0;
  BigInt sequences;
  Rational bound;
  Rational eta_over_4;
  Rational eta_over_8;
  /// Tail threshold eta/8 with the fixed delta 1/7 and the delta
  /// that the Markov step actually yields from mean eta/4.
  Rational threshold;
  Rational delta_fixed;
  Rational delta_consistent;
  std::vector<LearnerRisk> learners;
};

/// Exact expected loss, tail probabilities and the symmetrized bound for
/// every learner on a subset-indexed family. Throws
/// EnumerationBudgetExceeded above the budget.
ExactOracleReport nfl_exact(const ClassHandle& family, std::span<const Learner> learners, std::uint64_t m,
                            const ExactOptions& opt = {});

struct PairingAudit {
  std::uint64_t sequences = 0;
  std::uint64_t pairs = 0;  // (sequence, member) pairs with C_j within A_i
  std::uint64_t cardinality_violations = 0;
  std::uint64_t intersection_violations = 0;
  std::uint64_t involution_violations = 0;
  std::uint64_t inverse_violations = 0;     // pairing_gj_inverse(g_j(A)) != A
  std::uint64_t family_violations = 0;      // f_j(q_i) outside the family
  std::uint64_t measure_violations = 0;     // q_i^m(S_j) != f_j(q_i)^m(S_j), over all (i, j)
  std::uint64_t bijection_violations = 0;   // sequences where f_j is not injective on compatible members
  std::uint64_t measure_checks = 0;
};

/// Exhaustive check of the pairing contract on a filtered distribution family.
PairingAudit audit_pairing(const ClassHandle& family, std::uint64_t m, const ExactOptions& opt = {});

}  // namespace pacnfl
