#include "pacnfl/rational.hpp"

#include <cctype>

#include "pacnfl/error.hpp"

namespace pacnfl {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::BadWeights: return "BadWeights";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::EmptySample: return "EmptySample";
    case Errc::BadEta: return "BadEta";
    case Errc::BadN: return "BadN";
    case Errc::NonVanishing: return "NonVanishing";
    case Errc::EtaAboveGmax: return "EtaAboveGmax";
    case Errc::OutOfTable: return "OutOfTable";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::ClassTooLarge: return "ClassTooLarge";
    case Errc::MixedTasks: return "MixedTasks";
    case Errc::SampleTooSmall: return "SampleTooSmall";
    case Errc::BadPrecondition: return "BadPrecondition";
    case Errc::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case Errc::BadRange: return "BadRange";
    case Errc::EmptyEstimate: return "EmptyEstimate";
    case Errc::SearchBoundExceeded: return "SearchBoundExceeded";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyList: return "EmptyList";
    case Errc::ConfigError: return "ConfigError";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

Rational ratio(std::int64_t num, std::uint64_t den) {
  if (den == 0) throw Error(Errc::BadRange, "zero denominator");
  Rational r{BigInt(static_cast<long>(num)), from_u64_big(den)};
  r.canonicalize();
  return r;
}

Rational from_u64(std::uint64_t v) { return Rational(from_u64_big(v)); }

BigInt from_u64_big(std::uint64_t v) {
  BigInt z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

bool fits_u64(const BigInt& z) { return sgn(z) >= 0 && mpz_sizeinbase(z.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const BigInt& z) {
  if (!fits_u64(z)) throw Error(Errc::BadRange, "integer " + z.get_str() + " does not fit in 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt z;
  if (k > n) return z;
  mpz_bin_uiui(z.get_mpz_t(), n, k);
  return z;
}

Rational parse_rational(std::string_view text) {
  auto trimmed = std::string(text);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.pop_back();
  std::size_t start = 0;
  while (start < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[start]))) ++start;
  trimmed = trimmed.substr(start);
  if (trimmed.empty()) throw Error(Errc::ConfigError, "empty rational");
  for (std::size_t i = 0; i < trimmed.size(); ++i) {
    const char c = trimmed[i];
    const bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' || (c == '-' && i == 0);
    if (!ok) throw Error(Errc::ConfigError, "malformed rational '" + trimmed + "'");
  }
  Rational r;
  if (r.set_str(trimmed, 10) != 0 || r.get_den() == 0) {
    throw Error(Errc::ConfigError, "malformed rational '" + trimmed + "'");
  }
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_num().get_str() + "/" + r.get_den().get_str(); }

std::string to_string(const BigInt& z) { return z.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace pacnfl
