#include "pacnfl/sequence.hpp"

#include <algorithm>

#include "pacnfl/detail/overloaded.hpp"
#include "pacnfl/error.hpp"

namespace pacnfl {

namespace {

using detail::overloaded;

void require_stage(std::uint64_t i) {
  if (i == 0) throw Error(Errc::BadRange, "stages are indexed from 1");
}

Rational clamp(const Rational& v, const Rational& cap) {
  if (sgn(v) < 0) return Rational(0);
  return v > cap ? cap : v;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SequenceSpec::SequenceSpec(EtaRule eta, NRule n) : eta_(std::move(eta)), n_(std::move(n)) {
  std::visit(overloaded{
                 [](const Reciprocal& r) {
                   if (sgn(r.c) < 0) throw Error(Errc::BadEta, "Reciprocal constant must be >= 0");
                 },
                 [](const Constant& c) {
                   if (!in_unit_interval(c.c)) throw Error(Errc::BadEta, "Constant eta must lie in [0,1]");
                 },
                 [](const EtaTable& t) {
                   for (const auto& v : t.values) {
                     if (!in_unit_interval(v)) throw Error(Errc::BadEta, "table eta must lie in [0,1]");
                   }
                   if (!in_unit_interval(t.tail)) throw Error(Errc::BadEta, "table tail must lie in [0,1]");
                 },
                 [](const PolyWitness& w) {
                   if (w.k == 0 || w.f.size() < w.k) {
                     throw Error(Errc::OutOfTable, "PolyWitness table must cover 1..k");
                   }
                   for (std::size_t i = 0; i < w.f.size(); ++i) {
                     if (w.f[i] == 0) throw Error(Errc::BadEta, "PolyWitness f must be >= 1");
                     if (i > 0 && w.f[i] < w.f[i - 1]) throw Error(Errc::BadEta, "PolyWitness f must be non-decreasing");
                   }
                 },
             },
             eta_);
  std::visit(overloaded{
                 [](const Identity&) {},
                 [](const AffineOfTarget&) {},
                 [](const NTable& t) {
                   for (auto v : t.values) {
                     if (v == 0) throw Error(Errc::BadN, "stage sizes must be >= 1");
                   }
                 },
             },
             n_);
}

Rational SequenceSpec::eta(std::uint64_t i) const {
  require_stage(i);
  return std::visit(overloaded{
                        [&](const Reciprocal& r) { return Rational(r.c / from_u64(i)); },
                        [&](const Constant& c) { return c.c; },
                        [&](const EtaTable& t) { return i <= t.values.size() ? t.values[i - 1] : t.tail; },
                        [&](const PolyWitness& w) {
                          const Rational floor_value = ratio(1, w.f[w.k - 1]);
                          if (i > w.f.size()) return floor_value;
                          const Rational here = ratio(1, w.f[i - 1]);
                          return here > floor_value ? here : floor_value;
                        },
                    },
                    eta_);
}

Rational SequenceSpec::stage_eta(std::uint64_t i, const Rational& cap) const { return clamp(eta(i), cap); }

std::uint64_t SequenceSpec::n(std::uint64_t i) const {
  require_stage(i);
  return std::visit(overloaded{
                        [&](const Identity&) { return i; },
                        [&](const AffineOfTarget& a) -> std::uint64_t {
                          if (i > a.g.size()) {
                            throw Error(Errc::OutOfTable, "growth target tabulated on 1.." + std::to_string(a.g.size()) +
                                                              ", stage " + std::to_string(i) + " requested");
                          }
                          return 8 * (a.g[i - 1] + 1);
                        },
                        [&](const NTable& t) -> std::uint64_t {
                          if (i > t.values.size()) {
                            throw Error(Errc::OutOfTable, "n table has " + std::to_string(t.values.size()) +
                                                              " entries, stage " + std::to_string(i) + " requested");
                          }
                          return t.values[i - 1];
                        },
                    },
                    n_);
}

std::uint64_t SequenceSpec::eta_inverse(const Rational& eps) const {
  if (sgn(eps) <= 0) throw Error(Errc::BadRange, "eta_inverse needs eps > 0");
  const std::string eps_text = to_string(eps);
  return std::visit(
      overloaded{
          [&](const Reciprocal& r) -> std::uint64_t {
            if (sgn(r.c) == 0) return 1;
            const Rational q = r.c / eps;
            const BigInt i = ceil_div(q.get_num(), q.get_den());
            return std::max<std::uint64_t>(1, to_u64(i));
          },
          [&](const Constant& c) -> std::uint64_t {
            if (c.c > eps) throw Error(Errc::NonVanishing, "constant eta " + to_string(c.c) + " never <= " + eps_text);
            return 1;
          },
          [&](const EtaTable& t) -> std::uint64_t {
            if (t.tail > eps) throw Error(Errc::NonVanishing, "table tail " + to_string(t.tail) + " > " + eps_text);
            std::uint64_t last_bad = 0;
            for (std::size_t j = 0; j < t.values.size(); ++j) {
              if (t.values[j] > eps) last_bad = j + 1;
            }
            return last_bad + 1;
          },
          [&](const PolyWitness& w) -> std::uint64_t {
            if (ratio(1, w.f[w.k - 1]) > eps) {
              throw Error(Errc::NonVanishing, "witness floor 1/f(k) exceeds " + eps_text);
            }
            // eta is non-increasing because f is non-decreasing
            for (std::uint64_t i = 1; i <= w.k; ++i) {
              if (eta(i) <= eps) return i;
            }
            return w.k;
          },
      },
      eta_);
}

std::uint64_t SequenceSpec::n_max(std::uint64_t i) const {
  require_stage(i);
  if (std::holds_alternative<Identity>(n_)) return i;
  std::uint64_t best = 0;
  for (std::uint64_t j = 1; j <= i; ++j) best = std::max(best, n(j));
  return best;
}

Rational SequenceSpec::tail_sup(std::uint64_t i, const Rational& cap) const {
  return std::visit(overloaded{
                        [&](const Reciprocal&) { return clamp(eta(i + 1), cap); },
                        [&](const Constant& c) { return clamp(c.c, cap); },
                        [&](const EtaTable& t) {
                          Rational best = clamp(t.tail, cap);
                          for (std::size_t j = i; j < t.values.size(); ++j) {
                            const Rational v = clamp(t.values[j], cap);
                            if (v > best) best = v;
                          }
                          return best;
                        },
                        [&](const PolyWitness&) { return clamp(eta(i + 1), cap); },
                    },
                    eta_);
}

std::string SequenceSpec::describe() const {
  std::string e = std::visit(overloaded{
                                 [](const Reciprocal& r) { return "eta(i)=" + to_string(r.c) + "/i"; },
                                 [](const Constant& c) { return "eta(i)=" + to_string(c.c); },
                                 [](const EtaTable&) { return std::string("eta from table"); },
                                 [](const PolyWitness& w) {
                                   return "eta(i)=max{1/f(i),1/f(" + std::to_string(w.k) + ")}";
                                 },
                             },
                             eta_);
  std::string n = std::visit(overloaded{
                                 [](const Identity&) { return std::string("n(i)=i"); },
                                 [](const AffineOfTarget&) { return std::string("n(k)=8(g(k)+1)"); },
                                 [](const NTable&) { return std::string("n from table"); },
                             },
                             n_);
  return e + ", " + n;
}

}  // namespace pacnfl
