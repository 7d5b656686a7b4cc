#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pacnfl/rational.hpp"

namespace pacnfl {

// Mixture-weight rules i -> eta(i), i >= 1.

/// eta(i) = c / i
struct Reciprocal {
  Rational c;
};
/// eta(i) = c
struct Constant {
  Rational c;
};
/// eta(i) = values[i-1] for i <= values.size(), tail afterwards.
struct EtaTable {
  std::vector<Rational> values;
  Rational tail;
};
/// eta(i) = max{1/f(i), 1/f(k)} for a caller-supplied non-decreasing table
/// f on 1..F with F >= k; beyond the table the rule is constant 1/f(k).
struct PolyWitness {
  std::vector<std::uint64_t> f;
  std::uint64_t k = 1;
};

using EtaRule = std::variant<Reciprocal, Constant, EtaTable, PolyWitness>;

// Stage-size rules i -> n(i) >= 1.

struct Identity {};
/// n(k) = 8 (g(k) + 1) for a tabulated growth target g on 1..K.
struct AffineOfTarget {
  std::vector<std::uint64_t> g;
};
struct NTable {
  std::vector<std::uint64_t> values;
};

using NRule = std::variant<Identity, AffineOfTarget, NTable>;

/// Pair of stage sequences (eta, n) defining a staged union of families.
class SequenceSpec {
 public:
  SequenceSpec(EtaRule eta, NRule n);

  const EtaRule& eta_rule() const { return eta_; }
  const NRule& n_rule() const { return n_; }

  /// Raw rule value; may exceed 1 for Reciprocal(c) with i < c.
  Rational eta(std::uint64_t i) const;
  /// eta(i) clamped into [0, cap]; the mixture weight a stage actually uses.
  Rational stage_eta(std::uint64_t i, const Rational& cap = Rational(1)) const;
  std::uint64_t n(std::uint64_t i) const;

  /// Least i such that eta(j) <= eps for every j >= i, in closed form.
  /// Throws NonVanishing when no such i exists.
  std::uint64_t eta_inverse(const Rational& eps) const;
  /// max_{j <= i} n(j)
  std::uint64_t n_max(std::uint64_t i) const;

  /// Supremum of stage_eta over stages j > i, in closed form.
  Rational tail_sup(std::uint64_t i, const Rational& cap = Rational(1)) const;

  std::string describe() const;

 private:
  EtaRule eta_;
  NRule n_;
};

}  // namespace pacnfl
