#pragma once

#include <string>

#include "pacnfl/rational.hpp"

namespace pacnfl {

/// Point-wise loss l(h, x, y) = g(|h(x) - y|) with g(0) = 0.
class LossSpec {
 public:
  enum class Kind { Absolute, Squared, CappedLinear };

  static LossSpec absolute();
  static LossSpec squared();
  static LossSpec capped_linear(const Rational& cap);

  Kind kind() const { return kind_; }
  const Rational& cap() const { return cap_; }
  std::string name() const;

  Rational g(const Rational& t) const;
  /// min{sup_{a>0} g(a), 1}
  Rational g_max() const;
  /// Least t >= 0 with g(t) = y, for y in [0, g_max]. Irrational square
  /// roots are rounded down to a multiple of 2^-40, so g(g_inverse(y)) <= y.
  Rational g_inverse(const Rational& y) const;
  /// inf_{0<=t<=v} g(t) + g(v - t): the least combined loss any prediction
  /// pays against two labels v apart.
  Rational pair_floor(const Rational& v) const;

  friend bool operator==(const LossSpec& a, const LossSpec& b) { return a.kind_ == b.kind_ && a.cap_ == b.cap_; }

 private:
  LossSpec(Kind kind, Rational cap) : kind_(kind), cap_(std::move(cap)) {}

  Kind kind_;
  Rational cap_;
};

inline constexpr unsigned kDyadicBits = 40;

}  // namespace pacnfl
