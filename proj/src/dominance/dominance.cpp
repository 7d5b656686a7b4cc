#include "pacnfl/dominance.hpp"

#include <algorithm>

#include "pacnfl/detail/overloaded.hpp"
#include "pacnfl/error.hpp"
#include "pacnfl/learner.hpp"
#include "pacnfl/pairing.hpp"

namespace pacnfl {

using detail::overloaded;

std::string describe(const GrowthRule& rule) {
  return std::visit(overloaded{
                        [](const Polynomial& p) {
                          std::string out;
                          for (std::size_t d = p.coeffs.size(); d-- > 0;) {
                            if (p.coeffs[d] == 0) continue;
                            if (!out.empty()) out += " + ";
                            out += std::to_string(p.coeffs[d]);
                            if (d >= 1) out += "k";
                            if (d >= 2) out += "^" + std::to_string(d);
                          }
                          return out.empty() ? std::string("0") : out;
                        },
                        [](const Exponential& e) {
                          std::string out = std::to_string(e.coef) + "*" + std::to_string(e.base) + "^k";
                          if (e.offset != 0) out += " + " + std::to_string(e.offset);
                          return out;
                        },
                    },
                    rule);
}

FunctionTable::FunctionTable(std::vector<std::uint64_t> values, std::optional<GrowthRule> rule)
    : values_(std::move(values)), rule_(std::move(rule)) {}

FunctionTable FunctionTable::from_rule(const GrowthRule& rule, std::uint64_t k_max) {
  std::vector<std::uint64_t> values;
  values.reserve(k_max);
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    BigInt v = std::visit(overloaded{
                              [&](const Polynomial& p) -> BigInt {
                                BigInt acc = 0;
                                for (std::size_t d = p.coeffs.size(); d-- > 0;) {
                                  acc = acc * from_u64_big(k) + BigInt(static_cast<long>(p.coeffs[d]));
                                }
                                return acc;
                              },
                              [&](const Exponential& e) -> BigInt {
                                BigInt pw;
                                mpz_ui_pow_ui(pw.get_mpz_t(), e.base, k);
                                return BigInt(static_cast<long>(e.coef)) * pw + BigInt(static_cast<long>(e.offset));
                              },
                          },
                          rule);
    if (sgn(v) < 0) throw Error(Errc::BadRange, describe(rule) + " is negative at k=" + std::to_string(k));
    values.push_back(to_u64(v));
  }
  return FunctionTable(std::move(values), rule);
}

std::uint64_t FunctionTable::at(std::uint64_t k) const {
  if (k == 0 || k > values_.size()) {
    throw Error(Errc::OutOfTable, "table covers 1.." + std::to_string(values_.size()) + ", k=" + std::to_string(k));
  }
  return values_[k - 1];
}

DominanceCertificate dominates_prefix(const FunctionTable& f, const FunctionTable& g) {
  if (f.size() != g.size()) {
    throw Error(Errc::LengthMismatch, "prefix lengths " + std::to_string(f.size()) + " and " + std::to_string(g.size()));
  }
  DominanceCertificate c;
  c.horizon = f.size();
  if (c.horizon == 0) return c;
  if (g.at(c.horizon) > f.at(c.horizon)) {
    c.fails_at = c.horizon;
    return c;
  }
  std::uint64_t x0 = c.horizon;
  while (x0 > 1 && g.at(x0 - 1) <= f.at(x0 - 1)) --x0;
  c.witness = x0;
  return c;
}

std::string_view asymptotic_name(Asymptotic a) {
  switch (a) {
    case Asymptotic::Dominates:
      return "dominates";
    case Asymptotic::DoesNotDominate:
      return "does-not-dominate";
    case Asymptotic::Unknown:
      return "unknown";
  }
  return "?";
}

namespace {

// Base-1 exponentials are constants.
GrowthRule normalize(const GrowthRule& r) {
  if (const auto* e = std::get_if<Exponential>(&r)) {
    if (e->base == 1) return Polynomial{{e->coef + e->offset}};
    if (e->base == 0) return Polynomial{{e->offset}};
  }
  return r;
}

Asymptotic sign_verdict(int s) { return s >= 0 ? Asymptotic::Dominates : Asymptotic::DoesNotDominate; }

}  // namespace

Asymptotic asymptotic_dominates(const GrowthRule& f_in, const GrowthRule& g_in) {
  const GrowthRule f = normalize(f_in), g = normalize(g_in);
  const auto* fp = std::get_if<Polynomial>(&f);
  const auto* gp = std::get_if<Polynomial>(&g);
  const auto* fe = std::get_if<Exponential>(&f);
  const auto* ge = std::get_if<Exponential>(&g);
  if ((fe && fe->coef <= 0) || (ge && ge->coef <= 0)) return Asymptotic::Unknown;
  if (fp && gp) {
    const std::size_t d = std::max(fp->coeffs.size(), gp->coeffs.size());
    for (std::size_t i = d; i-- > 0;) {
      const std::int64_t a = i < fp->coeffs.size() ? fp->coeffs[i] : 0;
      const std::int64_t b = i < gp->coeffs.size() ? gp->coeffs[i] : 0;
      if (a != b) return sign_verdict(a > b ? 1 : -1);
    }
    return Asymptotic::Dominates;
  }
  if (fe && gp) return Asymptotic::Dominates;
  if (fp && ge) return Asymptotic::DoesNotDominate;
  if (fe->base != ge->base) return sign_verdict(fe->base > ge->base ? 1 : -1);
  if (fe->coef != ge->coef) return sign_verdict(fe->coef > ge->coef ? 1 : -1);
  return sign_verdict(fe->offset >= ge->offset ? 1 : -1);
}

FunctionTable diagonal(std::span<const FunctionTable> tables) {
  if (tables.empty()) throw Error(Errc::EmptyList, "diagonal of an empty list");
  const std::uint64_t k_max = tables.front().size();
  for (const auto& t : tables) {
    if (t.size() != k_max) throw Error(Errc::LengthMismatch, "tables must share the prefix length");
  }
  std::vector<std::uint64_t> f(k_max);
  for (std::uint64_t n = 1; n <= k_max; ++n) {
    const std::uint64_t upto = std::min<std::uint64_t>(n, tables.size());
    std::uint64_t best = 0;
    for (std::uint64_t i = 1; i <= upto; ++i) best = std::max(best, tables[i - 1].at(n));
    if (best == UINT64_MAX) throw Error(Errc::BadRange, "diagonal overflows at n=" + std::to_string(n));
    f[n - 1] = best + 1;
  }
  return FunctionTable(std::move(f));
}

SequenceSpec witness_spec(const FunctionTable& g) {
  if (g.size() == 0) throw Error(Errc::OutOfTable, "target table is empty");
  for (auto v : g.values()) {
    if (v > (UINT64_MAX / 8) - 1) throw Error(Errc::BadRange, "8 (g(k) + 1) overflows");
  }
  return SequenceSpec(Reciprocal{Rational(8)}, AffineOfTarget{g.values()});
}

SynthesisReport cofinality_pipeline(const FunctionTable& g, const std::optional<SpotCheckOptions>& spot) {
  SynthesisReport r;
  r.g = g;
  const SequenceSpec spec = witness_spec(g);
  const ClassHandle cls = stage_union(Task::Distribution, spec);
  r.class_description = cls.describe();
  for (std::uint64_t k = 1; k <= g.size(); ++k) {
    r.n_bar.push_back(spec.n(k));
    r.eta_bar.push_back(spec.eta(k));
    r.lb.push_back(spec.n(k) / 4);
  }
  const FunctionTable lb(r.lb);
  r.certificate = dominates_prefix(lb, g);
  r.strict = true;
  for (std::uint64_t k = 1; k <= g.size(); ++k) r.strict = r.strict && lb.at(k) > g.at(k);
  if (g.rule()) {
    // LB = 2 g + 2 in rule form
    GrowthRule lb_rule = std::visit(overloaded{
                                        [](const Polynomial& p) -> GrowthRule {
                                          Polynomial q = p;
                                          if (q.coeffs.empty()) q.coeffs.push_back(0);
                                          for (auto& c : q.coeffs) c *= 2;
                                          q.coeffs[0] += 2;
                                          return q;
                                        },
                                        [](const Exponential& e) -> GrowthRule {
                                          return Exponential{e.base, 2 * e.coef, 2 * e.offset + 2};
                                        },
                                    },
                                    *g.rule());
    r.asymptotic = asymptotic_dominates(lb_rule, *g.rule());
  }

  if (spot) {
    SpotCheck sc;
    sc.k = spot->k;
    sc.eta = spec.stage_eta(spot->k);
    sc.r = spot->r;
    sc.base = 4 * spot->r;
    sc.accuracy = sc.eta / 8;
    sc.delta_consistent = markov_reverse(sc.eta / 4, sc.eta / 8);
    sc.delta_fixed = Rational(1, 7);
    sc.target_value = g.at(spot->k);
    const ClassHandle family = p_eta_n(sc.eta, sc.base, sc.r);
    const Learner learner = scheffe_learner(family);
    EstimateProtocol p;
    p.eps = sc.accuracy;
    p.delta = sc.delta_consistent;
    p.trials = spot->trials;
    p.max_targets = spot->max_targets;
    p.m_max = spot->m_max;
    p.jobs = spot->jobs;
    sc.point = estimate_m(family, learner, p, RngStream(spot->seed, 0));
    sc.exceeds = sc.point.m_hat > sc.target_value;
    r.spot = std::move(sc);
  }
  return r;
}

}  // namespace pacnfl
