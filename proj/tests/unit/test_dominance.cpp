#include <doctest.h>

#include "../support/gen.hpp"
#include "pacnfl/dominance.hpp"
#include "pacnfl/error.hpp"
#include "pacnfl/json_io.hpp"

using namespace pacnfl;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Io;
}

FunctionTable table(std::vector<std::uint64_t> v) { return FunctionTable(std::move(v)); }

// least x0 such that g <= f on [x0, K], by brute force
std::optional<std::uint64_t> brute_witness(const std::vector<std::uint64_t>& f, const std::vector<std::uint64_t>& g) {
  for (std::uint64_t x0 = 1; x0 <= f.size(); ++x0) {
    bool ok = true;
    for (std::uint64_t x = x0; x <= f.size(); ++x) ok = ok && g[x - 1] <= f[x - 1];
    if (ok) return x0;
  }
  return std::nullopt;
}

BigInt eval_poly(const Polynomial& p, const BigInt& k) {
  BigInt v = 0;
  for (std::size_t i = p.coeffs.size(); i-- > 0;) v = v * k + BigInt(static_cast<long>(p.coeffs[i]));
  return v;
}

}  // namespace

TEST_CASE("tables from rules") {
  const auto sq = FunctionTable::from_rule(Polynomial{{0, 0, 1}}, 5);
  CHECK(sq.values() == std::vector<std::uint64_t>{1, 4, 9, 16, 25});
  const auto ex = FunctionTable::from_rule(Exponential{2, 3, -1}, 4);
  CHECK(ex.values() == std::vector<std::uint64_t>{5, 11, 23, 47});
  CHECK(ex.at(1) == 5);
  CHECK(code_of([&] { ex.at(0); }) == Errc::OutOfTable);
  CHECK(code_of([&] { ex.at(5); }) == Errc::OutOfTable);
  CHECK(code_of([] { FunctionTable::from_rule(Polynomial{{-3, 1}}, 5); }) == Errc::BadRange);
  CHECK(code_of([] { FunctionTable::from_rule(Exponential{2, 1, 0}, 64); }) == Errc::BadRange);
  CHECK(FunctionTable::from_rule(Exponential{2, 1, 0}, 63).at(63) == std::uint64_t{1} << 63);
  CHECK(describe(GrowthRule{Polynomial{{1, 0, 2}}}).find("k^2") != std::string::npos);
}

TEST_CASE("prefix dominance examples") {
  const auto c = dominates_prefix(table({1, 1, 9, 16}), table({1, 4, 9, 16}));
  CHECK(c.dominates());
  CHECK(c.witness == 3u);
  CHECK(c.horizon == 4);
  const auto d = dominates_prefix(table({5, 5, 5}), table({1, 2, 6}));
  CHECK_FALSE(d.dominates());
  CHECK(d.fails_at == 3u);
  CHECK(code_of([] { dominates_prefix(table({1}), table({1, 2})); }) == Errc::LengthMismatch);
}

TEST_CASE("prefix dominance agrees with brute force") {
  testgen::Gen gen(21);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t k = gen.between(1, 12);
    std::vector<std::uint64_t> f(k), g(k);
    for (std::uint64_t i = 0; i < k; ++i) {
      f[i] = gen.below(10);
      g[i] = gen.below(10);
    }
    const auto cert = dominates_prefix(table(f), table(g));
    CHECK(cert.witness == brute_witness(f, g));
    CHECK(cert.fails_at.has_value() == (g.back() > f.back()));
    // reflexive
    CHECK(dominates_prefix(table(f), table(f)).witness == 1u);
  }
}

TEST_CASE("asymptotic verdicts") {
  const GrowthRule sq = Polynomial{{0, 0, 1}}, lin = Polynomial{{5, 3}}, two = Exponential{2, 1, 0};
  CHECK(asymptotic_dominates(sq, lin) == Asymptotic::Dominates);
  CHECK(asymptotic_dominates(lin, sq) == Asymptotic::DoesNotDominate);
  CHECK(asymptotic_dominates(two, sq) == Asymptotic::Dominates);
  CHECK(asymptotic_dominates(sq, two) == Asymptotic::DoesNotDominate);
  CHECK(asymptotic_dominates(Exponential{3, 1, 0}, two) == Asymptotic::Dominates);
  CHECK(asymptotic_dominates(two, Exponential{2, 1, 7}) == Asymptotic::DoesNotDominate);
  CHECK(asymptotic_dominates(two, two) == Asymptotic::Dominates);
  // base 1 is a constant
  CHECK(asymptotic_dominates(Polynomial{{4}}, Exponential{1, 3, 1}) == Asymptotic::Dominates);
  CHECK(asymptotic_dominates(Exponential{2, -1, 0}, sq) == Asymptotic::Unknown);
  CHECK(asymptotic_name(Asymptotic::DoesNotDominate) == "does-not-dominate");
}

TEST_CASE("polynomial verdicts match far-out evaluation") {
  testgen::Gen gen(5);
  const BigInt far = BigInt(1) << 80;
  for (int trial = 0; trial < 400; ++trial) {
    Polynomial f, g;
    for (std::uint64_t i = 0, d = gen.between(1, 4); i < d; ++i) f.coeffs.push_back(static_cast<std::int64_t>(gen.below(5)));
    for (std::uint64_t i = 0, d = gen.between(1, 4); i < d; ++i) g.coeffs.push_back(static_cast<std::int64_t>(gen.below(5)));
    const bool expect = eval_poly(f, far) >= eval_poly(g, far);
    CHECK((asymptotic_dominates(f, g) == Asymptotic::Dominates) == expect);
  }
}

TEST_CASE("diagonal") {
  const std::vector<FunctionTable> gs{table({1, 1, 1, 1}), table({2, 4, 8, 16}), table({9, 0, 0, 20})};
  const auto f = diagonal(gs);
  // n=1 sees g_1 only, n=2 sees g_1, g_2, n>=3 all three
  CHECK(f.values() == std::vector<std::uint64_t>{2, 5, 9, 21});
  CHECK(code_of([] { diagonal({}); }) == Errc::EmptyList);
  const std::vector<FunctionTable> ragged{table({1, 2}), table({1})};
  CHECK(code_of([&] { diagonal(ragged); }) == Errc::LengthMismatch);

  testgen::Gen gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t k = gen.between(1, 10), count = gen.between(1, 8);
    std::vector<FunctionTable> list;
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<std::uint64_t> v(k);
      for (auto& x : v) x = gen.below(1000);
      list.emplace_back(v);
    }
    const auto d = diagonal(list);
    // g_i enters the diagonal at n = i, so only i <= K is covered
    for (std::uint64_t i = 1; i <= std::min(count, k); ++i) {
      for (std::uint64_t n = i; n <= k; ++n) CHECK(d.at(n) > list[i - 1].at(n));
      const auto cert = dominates_prefix(d, list[i - 1]);
      REQUIRE(cert.witness);
      CHECK(*cert.witness <= i);
    }
  }
}

TEST_CASE("witness spec and synthesis") {
  const auto g = FunctionTable::from_rule(Polynomial{{0, 0, 1}}, 6);
  const auto spec = witness_spec(g);
  CHECK(spec.n(3) == 80);
  CHECK(spec.eta(16) == Rational(1, 2));
  const auto rep = cofinality_pipeline(g);
  CHECK(rep.n_bar == std::vector<std::uint64_t>{16, 40, 80, 136, 208, 296});
  CHECK(rep.lb == std::vector<std::uint64_t>{4, 10, 20, 34, 52, 74});
  CHECK(rep.eta_bar[3] == 2);
  CHECK(rep.strict);
  CHECK(rep.certificate.witness == 1u);
  REQUIRE(rep.asymptotic);
  CHECK(*rep.asymptotic == Asymptotic::Dominates);
  CHECK_FALSE(rep.spot);
  CHECK(code_of([] { witness_spec(FunctionTable{}); }) == Errc::OutOfTable);
  CHECK(code_of([] { witness_spec(table({UINT64_MAX / 4})); }) == Errc::BadRange);

  testgen::Gen gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint64_t> v(gen.between(1, 20));
    for (auto& x : v) x = gen.below(1u << 30);
    const auto r = cofinality_pipeline(table(v));
    CHECK(r.strict);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(r.lb[i] == 2 * (v[i] + 1));
    CHECK_FALSE(r.asymptotic);
  }
}

TEST_CASE("spot check measures the embedded stage") {
  const auto g = FunctionTable::from_rule(Polynomial{{0, 0, 1}}, 3);
  SpotCheckOptions o;
  o.k = 2;
  o.r = 3;
  o.trials = 200;
  o.seed = 1;
  const auto rep = cofinality_pipeline(g, o);
  REQUIRE(rep.spot);
  const auto& s = *rep.spot;
  CHECK(s.eta == 1);
  CHECK(s.base == 12);
  CHECK(s.accuracy == Rational(1, 8));
  CHECK(s.delta_consistent == Rational(1, 7));
  CHECK(s.delta_fixed == Rational(1, 7));
  CHECK(s.target_value == 4);
  CHECK(s.exceeds == (s.point.m_hat > 4));
  CHECK(s.exceeds);
}

TEST_CASE("tables from json and csv") {
  const auto a = table_from_json(json::parse("[1, 4, 9]"), "g");
  CHECK(a.values() == std::vector<std::uint64_t>{1, 4, 9});
  const auto b = table_from_json(json::parse(R"({"rule":{"kind":"exponential","base":3},"k_max":3})"), "g");
  CHECK(b.values() == std::vector<std::uint64_t>{3, 9, 27});
  CHECK(table_from_csv("k,g\n1,5\n2,7\n", "t.csv").values() == std::vector<std::uint64_t>{5, 7});
  CHECK(table_from_csv("1,5\n2,7\n", "t.csv").values() == std::vector<std::uint64_t>{5, 7});
  CHECK(code_of([] { table_from_csv("k,g\n2,5\n", "t.csv"); }) == Errc::ConfigError);
  CHECK(code_of([] { table_from_json(json::parse(R"({"rule":{"kind":"cubic"},"k_max":3})"), "g"); }) ==
        Errc::ConfigError);
  CHECK(code_of([] { table_from_json(json::parse("[1, -4]"), "g"); }) == Errc::ConfigError);
}
