#include "pacnfl/loss.hpp"

#include "pacnfl/error.hpp"

namespace pacnfl {

namespace {

Rational min_of(const Rational& a, const Rational& b) { return a < b ? a : b; }

// Exact square root when both parts are perfect squares, else the largest
// multiple of 2^-40 whose square does not exceed y.
Rational sqrt_down(const Rational& y) {
  if (mpz_perfect_square_p(y.get_num_mpz_t()) && mpz_perfect_square_p(y.get_den_mpz_t())) {
    BigInt n, d;
    mpz_sqrt(n.get_mpz_t(), y.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), y.get_den_mpz_t());
    Rational r(n, d);
    r.canonicalize();
    return r;
  }
  BigInt scaled = y.get_num() << (2 * kDyadicBits);
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), y.get_den_mpz_t());
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational r(root, BigInt(1) << kDyadicBits);
  r.canonicalize();
  return r;
}

}  // namespace

LossSpec LossSpec::absolute() { return LossSpec(Kind::Absolute, Rational(0)); }

LossSpec LossSpec::squared() { return LossSpec(Kind::Squared, Rational(0)); }

LossSpec LossSpec::capped_linear(const Rational& cap) {
  if (sgn(cap) <= 0) throw Error(Errc::BadRange, "capped-linear cap must be > 0, got " + to_string(cap));
  return LossSpec(Kind::CappedLinear, cap);
}

std::string LossSpec::name() const {
  switch (kind_) {
    case Kind::Absolute:
      return "absolute";
    case Kind::Squared:
      return "squared";
    case Kind::CappedLinear:
      return "capped-linear(" + to_string(cap_) + ")";
  }
  return "?";
}

Rational LossSpec::g(const Rational& t) const {
  if (sgn(t) < 0) throw Error(Errc::BadRange, "loss argument must be >= 0");
  switch (kind_) {
    case Kind::Absolute:
      return t;
    case Kind::Squared:
      return t * t;
    case Kind::CappedLinear:
      return min_of(t, cap_);
  }
  return t;
}

Rational LossSpec::g_max() const {
  if (kind_ == Kind::CappedLinear) return min_of(cap_, Rational(1));
  return Rational(1);
}

Rational LossSpec::g_inverse(const Rational& y) const {
  if (sgn(y) < 0 || y > g_max()) {
    throw Error(Errc::EtaAboveGmax, "g_inverse argument " + to_string(y) + " outside [0, " + to_string(g_max()) + "]");
  }
  if (kind_ == Kind::Squared) return sqrt_down(y);
  return y;
}

Rational LossSpec::pair_floor(const Rational& v) const {
  if (sgn(v) < 0) throw Error(Errc::BadRange, "pair_floor argument must be >= 0");
  switch (kind_) {
    case Kind::Absolute:
      return v;
    case Kind::Squared:
      return v * v / 2;
    case Kind::CappedLinear:
      // concave on [0, v], so the minimum sits at an endpoint
      return min_of(v, cap_);
  }
  return v;
}

}  // namespace pacnfl
