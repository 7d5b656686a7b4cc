#include <doctest.h>

#include <cmath>
#include <set>

#include "../support/gen.hpp"
#include "../support/oracles.hpp"
#include "pacnfl/erm.hpp"
#include "pacnfl/error.hpp"
#include "pacnfl/learner.hpp"
#include "pacnfl/scheffe.hpp"
#include "pacnfl/task_loss.hpp"

using namespace pacnfl;

namespace {

Atom P(std::uint64_t v) { return Atom::plain(v); }
Atom L(std::uint64_t x, int y) { return Atom::labeled(x, y); }

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

Sample sample_of(std::vector<Atom> atoms) {
  Sample s;
  s.atoms = std::move(atoms);
  return s;
}

// Yatracos set of (a, b) recomputed from the mass maps.
std::set<Atom> brute_yatracos(const SparseDist& a, const SparseDist& b) {
  const auto ma = oracle::as_map(a), mb = oracle::as_map(b);
  std::set<Atom> out;
  for (const auto& [x, w] : ma) {
    if (w > oracle::mass(mb, x)) out.insert(x);
  }
  return out;
}

Rational emp(const Sample& s, const std::set<Atom>& set) {
  std::uint64_t hits = 0;
  for (const auto& a : s.atoms) hits += set.count(a);
  return ratio(static_cast<std::int64_t>(hits), s.size());
}

Rational mass_on(const SparseDist& p, const std::set<Atom>& set) {
  Rational t = 0;
  for (const auto& a : set) t += p.mass(a);
  return t;
}

Rational abs_r(const Rational& r) { return sgn(r) < 0 ? Rational(-r) : r; }

}  // namespace

TEST_CASE("yatracos sets") {
  const SparseDist a({{P(0), Rational(1, 2)}, {P(1), Rational(1, 2)}});
  const SparseDist b({{P(0), Rational(1, 2)}, {P(2), Rational(1, 2)}});
  CHECK(yatracos(a, b) == std::vector<Atom>{P(1)});
  CHECK(yatracos(b, a) == std::vector<Atom>{P(2)});
  CHECK(yatracos(a, a).empty());

  testgen::Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const auto p = g.dist(6, 9), q = g.dist(6, 9);
    const auto y = yatracos(p, q);
    CHECK(std::set<Atom>(y.begin(), y.end()) == brute_yatracos(p, q));
    CHECK(std::is_sorted(y.begin(), y.end()));
    // p(A) - q(A) on the Yatracos set is the total variation
    CHECK(mass_on(p, {y.begin(), y.end()}) - mass_on(q, {y.begin(), y.end()}) == tv(p, q));
  }
}

TEST_CASE("scheffe selects the minimum-distance candidate") {
  testgen::Gen g(0x5c4e);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t k = g.between(1, 6);
    std::vector<SparseDist> cands;
    for (std::size_t i = 0; i < k; ++i) cands.push_back(g.dist(5, 7, trial % 4 == 0));
    const SparseDist target = g.dist(5, 7, trial % 4 == 0);
    const Sample s = draw(target, g.between(1, 40), RngStream(trial, 3));

    std::vector<std::set<Atom>> sets;
    for (const auto& a : cands) {
      for (const auto& b : cands) {
        if (!(a == b)) sets.push_back(brute_yatracos(a, b));
      }
    }
    std::vector<Rational> scores;
    for (const auto& c : cands) {
      Rational worst = 0;
      for (const auto& set : sets) worst = std::max(worst, abs_r(mass_on(c, set) - emp(s, set)));
      scores.push_back(worst);
    }
    const std::size_t best = std::min_element(scores.begin(), scores.end()) - scores.begin();
    const ScheffeSelector sel(cands);
    CHECK(sel.select(s) == best);
    CHECK(scheffe_index(cands, s) == best);
    for (std::size_t i = 0; i < k; ++i) CHECK(sel.score(i, s) == scores[i]);

    // agnostic guarantee: tv(q*, p) <= 3 opt + 4 max_A |p(A) - mu_S(A)|
    Rational opt = 1, dev = 0;
    for (const auto& c : cands) opt = std::min(opt, tv(c, target));
    for (const auto& set : sets) dev = std::max(dev, abs_r(mass_on(target, set) - emp(s, set)));
    CHECK(tv(cands[best], target) <= 3 * opt + 4 * dev);
  }
}

TEST_CASE("scheffe on a class") {
  const auto cls = p_eta_n(Rational(1, 2), 2);
  // all three members; a sample of {0, 1, 1} points at A = {1}
  const auto out = scheffe(cls, sample_of({P(0), P(1), P(1)}));
  CHECK(out == cls.dist(0));
  CHECK(code_of([&] { scheffe(cls, Sample{}); }) == Errc::EmptySample);
  const auto empty = explicit_class(Task::Distribution, {});
  CHECK(code_of([&] { scheffe(empty, sample_of({P(0)})); }) == Errc::EmptyClass);
  CHECK(code_of([] { scheffe_learner(p_eta_n(Rational(1, 2), 30)); }) == Errc::ClassTooLarge);
  // duplicate candidates: the first occurrence wins
  const std::vector<SparseDist> dup{SparseDist::point(P(1)), SparseDist::point(P(0)), SparseDist::point(P(0))};
  CHECK(scheffe_index(dup, sample_of({P(0)})) == 1);
  // realizable, large sample: exact recovery at the pinned seed
  const auto big = p_eta_n(Rational(1, 2), 6, 3);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto p = big.dist(from_u64_big(i));
    CHECK(scheffe(big, draw(p, 400, RngStream(77, i))) == p);
  }
}

TEST_CASE("induced classifiers and H(Q)") {
  const SparseDist q({{L(0, 0), Rational(1, 2)}, {L(1, 1), Rational(1, 4)}, {L(2, 0), Rational(1, 8)},
                      {L(2, 1), Rational(1, 8)}, {L(3, 0), Rational(0)}});
  // ties at x = 2 go to label 1 within the support
  CHECK(induced_classifier(q).ones() == std::vector<std::uint64_t>{1, 2});
  CHECK(bayes_classifier(q).ones() == std::vector<std::uint64_t>{1});

  const auto cls = classification_stage(Rational(1, 2), 1);
  const auto hs = hypotheses_of(cls.distributions());
  REQUIRE(hs.size() == 4);
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto b = cls.subset(from_u64_big(i));
    CHECK(hs[i].ones() == b);
  }
  const std::vector<SparseDist> same{cls.dist(1), cls.dist(1), cls.dist(0)};
  CHECK(hypotheses_of(same).size() == 2);
}

TEST_CASE("erm and empirical losses") {
  const std::vector<BinaryHypothesis> hs{BinaryHypothesis(), BinaryHypothesis({1}), BinaryHypothesis({1, 2})};
  const Sample s = sample_of({L(1, 1), L(2, 0), L(3, 0), L(1, 1)});
  CHECK(empirical_errors(hs[0], s) == 2);
  CHECK(empirical_errors(hs[1], s) == 0);
  CHECK(empirical_errors(hs[2], s) == 1);
  CHECK(erm_index(hs, s) == 1);
  CHECK(erm_index(hs, sample_of({L(5, 0)})) == 0);
  CHECK(code_of([&] { erm_index(std::span<const BinaryHypothesis>{}, s); }) == Errc::EmptyClass);

  const std::vector<RealHypothesis> rs{RealHypothesis{}, RealHypothesis({{1, Rational(1, 2)}})};
  RealSample rsamp;
  rsamp.points = {{1, Rational(1, 2)}, {2, Rational(0)}};
  CHECK(empirical_loss(rs[0], rsamp, LossSpec::absolute()) == Rational(1, 2));
  CHECK(empirical_loss(rs[1], rsamp, LossSpec::absolute()) == 0);
  CHECK(erm_index(rs, rsamp, LossSpec::squared()) == 1);

  testgen::Gen g(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BinaryHypothesis> pool;
    for (int i = 0; i < 5; ++i) {
      std::vector<std::uint64_t> ones;
      for (std::uint64_t x = 1; x <= 4; ++x) {
        if (g.coin()) ones.push_back(x);
      }
      pool.emplace_back(ones);
    }
    Sample t;
    for (std::uint64_t i = 0, m = g.between(1, 12); i < m; ++i) t.atoms.push_back(L(g.between(1, 5), g.coin()));
    const std::size_t pick = erm_index(pool, t);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      CHECK(empirical_errors(pool[pick], t) <= empirical_errors(pool[i], t));
      if (i < pick) CHECK(empirical_errors(pool[i], t) > empirical_errors(pool[pick], t));
    }
  }
}

TEST_CASE("task losses") {
  const SparseDist p({{L(0, 0), Rational(1, 2)}, {L(1, 1), Rational(1, 4)}, {L(2, 0), Rational(1, 4)}});
  CHECK(loss_01(BinaryHypothesis(), p) == Rational(1, 4));
  CHECK(loss_01(BinaryHypothesis({1, 2}), p) == Rational(1, 4));
  CHECK(bayes_loss(p) == 0);
  CHECK(excess_01(BinaryHypothesis({2}), p) == Rational(1, 2));

  const RealTarget t{SparseDist({{P(1), Rational(1, 2)}, {P(2), Rational(1, 2)}}), RealHypothesis({{1, Rational(1, 2)}})};
  CHECK(loss_g(RealHypothesis{}, t, LossSpec::absolute()) == Rational(1, 4));
  CHECK(loss_g(RealHypothesis{}, t, LossSpec::squared()) == Rational(1, 8));
  CHECK(loss_g(RealHypothesis({{2, Rational(1)}}), t, LossSpec::capped_linear(Rational(1, 3))) == Rational(1, 3));

  const TaskLoss dist_loss(Task::Distribution);
  CHECK(dist_loss(Output{SparseDist::point(P(0))}, Target{SparseDist::point(P(1))}) == 1);
  CHECK(code_of([&] { dist_loss(Output{BinaryHypothesis{}}, Target{SparseDist::point(P(1))}); }) == Errc::MixedTasks);

  const auto cls = classification_stage(Rational(1, 2), 1);
  const auto opt = opt_loss(cls, Target{cls.dist(2)});
  CHECK(opt.value == 0);
  CHECK(opt.witness == 2);
}

TEST_CASE("empirical baseline") {
  const auto base = empirical_baseline(Task::Distribution);
  const auto out = std::get<SparseDist>(base(AnySample{sample_of({P(0), P(3), P(3), P(0)})}));
  CHECK(out.mass(P(3)) == Rational(1, 2));
  const auto plural = empirical_baseline(Task::Classification);
  const auto h = std::get<BinaryHypothesis>(plural(AnySample{sample_of({L(1, 1), L(1, 0), L(2, 1), L(3, 0)})}));
  CHECK(h.ones() == std::vector<std::uint64_t>{2});
  CHECK(code_of([&] { base(AnySample{Sample{}}); }) == Errc::EmptySample);
}

TEST_CASE("truncation learner") {
  const auto staged = stage_union(Task::Distribution, SequenceSpec(Reciprocal{Rational(8)}, Identity{}));
  const auto learner = truncation_learner(staged, Rational(8));
  CHECK(learner.alpha() == 3);
  const auto trunc = staged.truncate(Rational(8));
  // a target in an included stage is recovered from a large sample
  const auto p = trunc.dist(10);
  const auto out = std::get<SparseDist>(learner(AnySample{draw(p, 2000, RngStream(5, 0))}));
  CHECK(tv(out, p) <= Rational(1, 4));
}

TEST_CASE("union learner") {
  const auto cls = p_eta_n(Rational(1, 2), 3);
  const std::vector<Learner> parts{constant_learner(Output{cls.dist(0)}, Task::Distribution),
                                   constant_learner(Output{cls.dist(6)}, Task::Distribution)};
  const auto u = union_learner(parts);
  const auto target = cls.dist(6);
  const auto out = std::get<SparseDist>(u(AnySample{draw(target, 200, RngStream(9, 0))}));
  CHECK(out == target);
  CHECK(code_of([] { union_learner({}); }) == Errc::EmptyList);
  const std::vector<Learner> mixed{constant_learner(Output{cls.dist(0)}, Task::Distribution),
                                   empirical_baseline(Task::Classification)};
  CHECK(code_of([&] { union_learner(mixed); }) == Errc::MixedTasks);
}

TEST_CASE("advertised sample sizes") {
  auto expect = [](double v) { return static_cast<std::uint64_t>(std::ceil(v)); };
  CHECK(scheffe_m_for(3, Rational(2, 5), Rational(1, 10)) == 280);
  for (std::uint64_t size : {1, 7, 100, 1000}) {
    for (const auto& [e, d] : {std::pair{0.5, 0.1}, std::pair{0.25, 0.05}, std::pair{0.125, 0.5}}) {
      const Rational eps(Rational(static_cast<long>(e * 1000), 1000)), del(Rational(static_cast<long>(d * 1000), 1000));
      const double ep = e / 4;
      CHECK(scheffe_m_for(size, eps, del) ==
            expect((std::log(3.0 * size * size) + std::log(1 / d)) / (2 * ep * ep)));
      CHECK(finite_erm_m_for(size, eps, del) == expect(2 * std::log(2.0 * size / d) / (e * e)));
      CHECK(union_m_for(size, eps, del) == expect(4 * (std::log(double(size)) + std::log(2 / d)) / (e * e)));
    }
  }
  // I = eta_inverse(2) = 4, n_max = 4
  const SequenceSpec spec(Reciprocal{Rational(8)}, Identity{});
  CHECK(truncation_m_for(spec, Rational(8), Rational(1, 10)) ==
        expect(128 * (std::log(3.0 * 16 * 16) + std::log(10.0)) / 64));
  CHECK(code_of([] { scheffe_m_for(3, Rational(0), Rational(1, 2)); }) == Errc::BadRange);
  CHECK(code_of([] { scheffe_m_for(3, Rational(1, 2), Rational(1)); }) == Errc::BadRange);
  CHECK(code_of([] { scheffe_m_for(0, Rational(1, 2), Rational(1, 2)); }) == Errc::EmptyClass);
  // huge classes stay finite through the log
  CHECK(scheffe_m_for(BigInt(1) << 5000, Rational(1, 2), Rational(1, 2)) > 0);
}
