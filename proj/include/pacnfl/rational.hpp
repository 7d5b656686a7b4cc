#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pacnfl {

/// Exact rational number. All probabilities, distances and losses are kept
/// exact; doubles appear only in Monte Carlo summaries.
using Rational = mpq_class;
using BigInt = mpz_class;

Rational ratio(std::int64_t num, std::uint64_t den);
Rational from_u64(std::uint64_t v);

/// Parses "a/b", "a" or "-a/b". Throws Error(ConfigError) on malformed input.
Rational parse_rational(std::string_view text);

/// Always "num/den", including integers ("1/1", "0/1").
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

double to_double(const Rational& r);

BigInt from_u64_big(std::uint64_t v);
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Converts to uint64, throwing Error(BadRange) if it does not fit.
std::uint64_t to_u64(const BigInt& z);
bool fits_u64(const BigInt& z);

inline bool in_unit_interval(const Rational& r) { return r >= 0 && r <= 1; }

}  // namespace pacnfl
