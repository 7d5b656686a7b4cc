#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pacnfl/family.hpp"
#include "pacnfl/montecarlo.hpp"
#include "pacnfl/sequence.hpp"

namespace pacnfl {

/// k -> a_0 + a_1 k + ... + a_d k^d
struct Polynomial {
  std::vector<std::int64_t> coeffs;
};
/// k -> coef * base^k + offset
struct Exponential {
  std::uint64_t base = 2;
  std::int64_t coef = 1;
  std::int64_t offset = 0;
};
using GrowthRule = std::variant<Polynomial, Exponential>;

std::string describe(const GrowthRule& rule);

/// Values of a function N -> N on the prefix 1..K.
class FunctionTable {
 public:
  FunctionTable() = default;
  explicit FunctionTable(std::vector<std::uint64_t> values, std::optional<GrowthRule> rule = {});
  /// Throws BadRange on negative or overflowing values.
  static FunctionTable from_rule(const GrowthRule& rule, std::uint64_t k_max);

  std::uint64_t size() const { return values_.size(); }
  /// k in 1..K
  std::uint64_t at(std::uint64_t k) const;
  const std::vector<std::uint64_t>& values() const { return values_; }
  const std::optional<GrowthRule>& rule() const { return rule_; }

 private:
  std::vector<std::uint64_t> values_;
  std::optional<GrowthRule> rule_;
};

/// Outcome of checking g <= f on a finite prefix; says nothing beyond it.
struct DominanceCertificate {
  std::uint64_t horizon = 0;
  /// least x0 with g(x) <= f(x) for all x in [x0, horizon]
  std::optional<std::uint64_t> witness;
  /// set when g(horizon) > f(horizon)
  std::optional<std::uint64_t> fails_at;

  bool dominates() const { return witness.has_value(); }
};

/// Does f eventually dominate g on the common prefix? Throws LengthMismatch.
DominanceCertificate dominates_prefix(const FunctionTable& f, const FunctionTable& g);

enum class Asymptotic { Dominates, DoesNotDominate, Unknown };
std::string_view asymptotic_name(Asymptotic a);
/// Symbolic verdict on g <=_ed f over all of N for the shipped rule kinds.
Asymptotic asymptotic_dominates(const GrowthRule& f, const GrowthRule& g);

/// f(n) = max{g_i(n) : i <= min(n, list length)} + 1 on 1..K.
/// Throws EmptyList, LengthMismatch.
FunctionTable diagonal(std::span<const FunctionTable> tables);

struct SpotCheckOptions {
  std::uint64_t k = 2;
  /// |A| of the embedded filtered family (base 4r).
  std::uint64_t r = 3;
  std::uint64_t trials = 200;
  std::uint64_t max_targets = 64;
  std::uint64_t m_max = std::uint64_t{1} << 12;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

struct SpotCheck {
  std::uint64_t k = 0;
  Rational eta;
  std::uint64_t r = 0;
  std::uint64_t base = 0;
  Rational accuracy;          // eta / 8
  Rational delta_consistent;  // markov_reverse(eta/4, eta/8)
  Rational delta_fixed;       // 1/7, reported only
  CurvePoint point;
  std::uint64_t target_value = 0;  // g(k)
  bool exceeds = false;            // m_hat > g(k)
};

struct SynthesisReport {
  FunctionTable g;
  std::vector<std::uint64_t> n_bar;  // 8 (g(k) + 1)
  std::vector<Rational> eta_bar;     // 8 / k, raw
  std::vector<std::uint64_t> lb;     // n_bar / 4 = 2 (g(k) + 1)
  std::string class_description;
  DominanceCertificate certificate;  // LB against g
  bool strict = false;               // LB(k) > g(k) for every k
  std::optional<Asymptotic> asymptotic;
  std::optional<SpotCheck> spot;
};

/// Witness spec for g: eta(k) = 8/k, n(k) = 8 (g(k) + 1), with the lower
/// bound LB(k) = n(k)/4 of the embedded stage. The class is built lazily;
/// no member is materialized unless the spot check is requested.
SequenceSpec witness_spec(const FunctionTable& g);
SynthesisReport cofinality_pipeline(const FunctionTable& g, const std::optional<SpotCheckOptions>& spot = {});

}  // namespace pacnfl
