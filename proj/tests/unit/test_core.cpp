#include <doctest.h>

#include <map>

#include "../support/gen.hpp"
#include "../support/oracles.hpp"
#include "pacnfl/error.hpp"
#include "pacnfl/json_io.hpp"
#include "pacnfl/sample.hpp"

using namespace pacnfl;

namespace {

Atom P(std::uint64_t v) { return Atom::plain(v); }
SparseDist delta(std::uint64_t v) { return SparseDist::point(P(v)); }
SparseDist U(std::initializer_list<std::uint64_t> vs) {
  std::vector<std::uint64_t> v(vs);
  const auto atoms = plain_atoms(v);
  return uniform(atoms);
}
SparseDist half_mix(const SparseDist& a, const SparseDist& b) {
  const std::vector<std::pair<Rational, SparseDist>> parts{{Rational(1, 2), a}, {Rational(1, 2), b}};
  return mixture(parts);
}

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

}  // namespace

TEST_CASE("rationals print and parse as num/den") {
  CHECK(to_string(Rational(1, 2)) == "1/2");
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(code_of([] { parse_rational("0.5"); }) == Errc::ConfigError);
  CHECK(code_of([] { parse_rational("1/0"); }) == Errc::ConfigError);
  CHECK(code_of([] { to_u64(BigInt(-1)); }) == Errc::BadRange);
}

TEST_CASE("binomial matches Pascal's triangle") {
  std::vector<std::vector<BigInt>> t(31);
  for (std::uint64_t n = 0; n <= 30; ++n) {
    t[n].resize(n + 1);
    t[n][0] = t[n][n] = 1;
    for (std::uint64_t k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    for (std::uint64_t k = 0; k <= n; ++k) CHECK(binomial(n, k) == t[n][k]);
  }
  CHECK(binomial(3, 5) == 0);
}

TEST_CASE("uniform") {
  CHECK(U({5}).entries() == std::vector<SparseDist::Entry>{{P(5), Rational(1)}});
  const auto u = U({1, 2, 3});
  for (auto v : {1, 2, 3}) CHECK(u.mass(P(v)) == Rational(1, 3));
  CHECK(code_of([] { uniform(std::span<const Atom>{}); }) == Errc::EmptySupport);
  CHECK(U({2, 2, 1}) == U({1, 2}));
}

TEST_CASE("mixture") {
  const auto p = U({1, 2, 7});
  const std::vector<std::pair<Rational, SparseDist>> identity{{Rational(1), p}};
  CHECK(mixture(identity) == p);

  const auto m = half_mix(delta(0), U({1, 2}));
  CHECK(m.mass(P(0)) == Rational(1, 2));
  CHECK(m.mass(P(1)) == Rational(1, 4));
  CHECK(m.mass(P(2)) == Rational(1, 4));

  const std::vector<std::pair<Rational, SparseDist>> short_w{{Rational(1, 2), delta(0)}, {Rational(1, 3), delta(1)}};
  CHECK(code_of([&] { mixture(short_w); }) == Errc::BadWeights);
  const std::vector<std::pair<Rational, SparseDist>> neg{{Rational(3, 2), delta(0)}, {Rational(-1, 2), delta(1)}};
  CHECK(code_of([&] { mixture(neg); }) == Errc::BadWeights);
  const std::vector<std::pair<Rational, SparseDist>> zero{{Rational(1), delta(0)}, {Rational(0), delta(1)}};
  CHECK(mixture(zero).support_size() == 1);
}

TEST_CASE("SparseDist rejects invalid entries") {
  using E = std::vector<SparseDist::Entry>;
  CHECK(code_of([] { SparseDist(E{{P(0), Rational(1, 2)}}); }) == Errc::InvalidDistribution);
  CHECK(code_of([] { SparseDist(E{{P(0), Rational(1, 2)}, {P(0), Rational(1, 2)}}); }) == Errc::InvalidDistribution);
  CHECK(code_of([] { SparseDist(E{{P(0), Rational(3, 2)}, {P(1), Rational(-1, 2)}}); }) == Errc::InvalidDistribution);
  const SparseDist p(E{{P(3), Rational(1, 2)}, {P(1), Rational(1, 2)}, {P(2), Rational(0)}});
  REQUIRE(p.support_size() == 2);
  CHECK(p.entries()[0].first == P(1));
  CHECK(Atom::labeled(1, 0) < Atom::labeled(1, 1));
  CHECK(Atom::labeled(1, 1) < Atom::labeled(2, 0));
}

TEST_CASE("tv examples") {
  CHECK(tv(delta(0), delta(0)) == 0);
  CHECK(tv(delta(0), delta(1)) == 1);
  CHECK(tv(half_mix(delta(0), U({1, 2})), half_mix(delta(0), U({2, 3}))) == Rational(1, 4));
  for (std::uint64_t k = 1; k <= 9; ++k) {
    const Rational w(1, k);
    const std::vector<std::pair<Rational, SparseDist>> parts{{1 - w, delta(0)}, {w, U({3, 4, 9})}};
    CHECK(tv(delta(0), mixture(parts)) == w);
  }
}

TEST_CASE("tv is a metric bounded by 1 and equals the event supremum") {
  testgen::Gen g(0x7476);
  for (int trial = 0; trial < 300; ++trial) {
    const bool labeled = trial % 3 == 0;
    const auto p = g.dist(5, 7, labeled), q = g.dist(5, 7, labeled), r = g.dist(5, 7, labeled);
    const Rational pq = tv(p, q);
    CHECK(pq == tv(q, p));
    CHECK(pq >= 0);
    CHECK(pq <= 1);
    CHECK((pq == 0) == (p == q));
    CHECK(tv(p, p) == 0);
    CHECK(tv(p, r) <= pq + tv(q, r));
    CHECK(pq == oracle::half_l1(p, q));
    CHECK(pq == oracle::brute_tv(p, q));
  }
}

TEST_CASE("event_prob") {
  const Rational eta(1, 3);
  const std::vector<std::pair<Rational, SparseDist>> parts{{1 - eta, delta(0)}, {eta, U({1, 2})}};
  const auto p = mixture(parts);
  const std::vector<Atom> zero{P(0)};
  CHECK(event_prob(p, zero) == 1 - eta);
  CHECK(event_prob(p, std::span<const Atom>{}) == 0);
  CHECK(event_prob(p, p.support()) == 1);
  const std::vector<Atom> repeated{P(1), P(1), P(40)};
  CHECK(event_prob(p, repeated) == eta / 2);
}

TEST_CASE("empirical_measure") {
  Sample s;
  s.atoms = {P(0), P(0), P(1)};
  const std::vector<Atom> a0{P(0)}, disjoint{P(5)}, all{P(0), P(1)};
  CHECK(empirical_measure(s, a0) == Rational(2, 3));
  CHECK(empirical_measure(s, disjoint) == 0);
  CHECK(empirical_measure(s, all) == 1);
  CHECK(code_of([&] { empirical_measure(Sample{}, a0); }) == Errc::EmptySample);
}

TEST_CASE("draw is deterministic and records provenance") {
  const Sample z = draw(delta(0), 5, RngStream(1, 2));
  CHECK(z.atoms == std::vector<Atom>(5, P(0)));
  REQUIRE(z.provenance);
  CHECK(z.provenance->seed == 1);
  CHECK(z.provenance->stream == 2);

  testgen::Gen g(99);
  for (int i = 0; i < 50; ++i) {
    const auto p = g.dist(6, 10, i % 2 == 0);
    const RngStream rng(g.below(1000), g.below(1000));
    const auto a = draw(p, 30, rng), b = draw(p, 30, rng);
    CHECK(a.atoms == b.atoms);
    CHECK(a.size() == 30);
    for (const auto& x : a.atoms) CHECK(p.mass(x) > 0);
  }
  CHECK(draw(U({1, 2, 3}), 0, RngStream(0, 0)).empty());
}

TEST_CASE("inverse-CDF thresholds are exact") {
  const Sampler half(U({3, 8}));
  const std::uint64_t mid = std::uint64_t{1} << 63;
  CHECK(half.locate(0) == 0);
  CHECK(half.locate(mid - 1) == 0);
  CHECK(half.locate(mid) == 1);
  CHECK(half.locate(~std::uint64_t{0}) == 1);
  // thirds: floor(2^64 / 3) is the first threshold
  const Sampler thirds(U({1, 2, 3}));
  const std::uint64_t third = ~std::uint64_t{0} / 3;  // floor((2^64 - 1) / 3) = floor(2^64 / 3)
  CHECK(thirds.locate(third - 1) == 0);
  CHECK(thirds.locate(third + 1) == 1);
}

TEST_CASE("uniform frequencies at the pinned seed") {
  const auto s = draw(U({1, 2, 3, 4}), 40000, RngStream(20240601, 0));
  std::map<std::uint64_t, int> counts;
  for (const auto& a : s.atoms) ++counts[a.value];
  for (std::uint64_t v = 1; v <= 4; ++v) {
    const double f = counts[v] / 40000.0;
    CHECK(f >= 0.24);
    CHECK(f <= 0.26);
  }
}

TEST_CASE("rng streams are distinct and reproducible") {
  const RngStream a(5, 0);
  CHECK(a.engine()() == RngStream(5, 0).engine()());
  CHECK(a.engine()() != a.at(1).engine()());
  CHECK(a.engine()() != a.derive(7).engine()());
  CHECK(a.derive(7).engine()() == RngStream(5, 0).derive(7).engine()());
  CHECK(a.derive(7).engine()() != a.derive(8).engine()());
}

TEST_CASE("distribution json round trip") {
  testgen::Gen g(17);
  for (int i = 0; i < 40; ++i) {
    const auto p = g.dist(6, 10, i % 2 == 1).with_tag("t" + std::to_string(i));
    const json j = dist_json(p);
    const auto back = dist_from_json(json::parse(j.dump()), "p");
    CHECK(back == p);
    CHECK(back.tag() == p.tag());
  }
  const json labeled = dist_json(SparseDist::point(Atom::labeled(3, 1)));
  CHECK(labeled.dump() == R"({"atoms":[[[3,1],"1/1"]],"tag":""})");

  const json bad = json::parse(R"({"atoms": [[0, "1/2"], [1, "x"]]})");
  try {
    dist_from_json(bad, "dist");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigError);
    CHECK(std::string(e.what()).find("dist.atoms[1][1]") != std::string::npos);
  }
  CHECK(code_of([] { dist_from_json(json::parse(R"({"atoms": [[0, "1/2"]]})"), "d"); }) == Errc::ConfigError);
}
