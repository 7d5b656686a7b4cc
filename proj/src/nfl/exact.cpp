#include "pacnfl/exact.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "pacnfl/error.hpp"
#include "pacnfl/pairing.hpp"

namespace pacnfl {

namespace {

struct Letter {
  Atom atom;          // distribution / classification
  LabeledPoint point;  // real-valued
};

struct Setup {
  SubsetShape shape;
  std::vector<Letter> alphabet;
  std::vector<Target> targets;
  std::vector<std::vector<std::uint64_t>> subsets;
  std::vector<std::vector<Rational>> mass;  // [member][letter]
  Rational v;                                // g^{-1}(eta), real-valued only
  std::uint64_t m = 0;
  BigInt sequences;
};

const SubsetShape& require_shape(const ClassHandle& family) {
  const SubsetShape* s = family.shape();
  if (!s) throw Error(Errc::BadPrecondition, "exact oracle needs a subset-indexed family");
  if (s->task == Task::Distribution) {
    if (!s->filter) throw Error(Errc::BadPrecondition, "distribution family must be filtered to |A| = r");
    if (2 * *s->filter > s->points) throw Error(Errc::BadPrecondition, "filtered family needs 2r <= base");
  }
  return *s;
}

std::vector<Letter> alphabet_of(const SubsetShape& s, const Rational& v) {
  std::vector<Letter> out;
  switch (s.task) {
    case Task::Distribution:
      for (std::uint64_t x = 0; x <= s.points; ++x) out.push_back(Letter{Atom::plain(x), {}});
      break;
    case Task::Classification:
      out.push_back(Letter{Atom::labeled(0, 0), {}});
      for (std::uint64_t x = 1; x <= s.points; ++x) {
        out.push_back(Letter{Atom::labeled(x, 0), {}});
        out.push_back(Letter{Atom::labeled(x, 1), {}});
      }
      break;
    case Task::RealValued:
      for (std::uint64_t x = 1; x <= s.points; ++x) {
        out.push_back(Letter{{}, LabeledPoint{x, Rational(0)}});
        out.push_back(Letter{{}, LabeledPoint{x, v}});
      }
      break;
  }
  return out;
}

BigInt power(std::size_t base, std::uint64_t m) {
  BigInt z;
  mpz_ui_pow_ui(z.get_mpz_t(), base, m);
  return z;
}

Setup build(const ClassHandle& family, std::uint64_t m, std::uint64_t budget) {
  Setup st;
  st.shape = require_shape(family);
  st.m = m;
  if (st.shape.task == Task::RealValued) st.v = st.shape.loss->g_inverse(st.shape.eta);
  st.alphabet = alphabet_of(st.shape, st.v);
  st.sequences = power(st.alphabet.size(), m);
  const BigInt members = family.size();
  if (members * st.sequences > from_u64_big(budget)) {
    throw Error(Errc::EnumerationBudgetExceeded, to_string(members) + " members x " + to_string(st.sequences) +
                                                     " sequences exceeds the budget of " + std::to_string(budget));
  }
  const std::uint64_t t = to_u64(members);
  for (std::uint64_t i = 0; i < t; ++i) {
    const BigInt ord = from_u64_big(i);
    st.targets.push_back(target_of(family, ord));
    st.subsets.push_back(family.subset(ord));
    std::vector<Rational> row;
    row.reserve(st.alphabet.size());
    if (const auto* p = std::get_if<SparseDist>(&st.targets.back())) {
      for (const auto& l : st.alphabet) row.push_back(p->mass(l.atom));
    } else {
      const auto& rt = std::get<RealTarget>(st.targets.back());
      for (const auto& l : st.alphabet) {
        row.push_back(rt.labeler(l.point.x) == l.point.y ? rt.marginal.mass(Atom::plain(l.point.x)) : Rational(0));
      }
    }
    st.mass.push_back(std::move(row));
  }
  return st;
}

std::vector<std::size_t> decode(std::uint64_t j, std::size_t k, std::uint64_t m) {
  std::vector<std::size_t> d(m);
  for (std::uint64_t pos = m; pos-- > 0;) {
    d[pos] = j % k;
    j /= k;
  }
  return d;
}

AnySample make_sample(const Setup& st, const std::vector<std::size_t>& digits) {
  if (st.shape.task == Task::RealValued) {
    RealSample s;
    for (auto d : digits) s.points.push_back(st.alphabet[d].point);
    return s;
  }
  Sample s;
  for (auto d : digits) s.atoms.push_back(st.alphabet[d].atom);
  return s;
}

std::vector<std::uint64_t> observed(const Setup& st, const std::vector<std::size_t>& digits) {
  std::vector<std::uint64_t> seen;
  for (auto d : digits) {
    const std::uint64_t x = st.shape.task == Task::RealValued ? st.alphabet[d].point.x : st.alphabet[d].atom.value;
    if (x >= 1 && x <= st.shape.points) seen.push_back(x);
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  return seen;
}

// d(q_i, f_j(q_i)) for the pairing of the task
Rational pair_distance(const Setup& st, std::size_t i, const std::vector<std::size_t>& digits) {
  const auto seen = observed(st, digits);
  const std::uint64_t unseen = st.shape.points - seen.size();
  switch (st.shape.task) {
    case Task::Distribution: {
      Sample s;
      for (auto d : digits) s.atoms.push_back(st.alphabet[d].atom);
      const auto ctx = PairingContext::from_sample(s.atoms, st.shape.points);
      const auto& q = std::get<SparseDist>(st.targets[i]);
      return tv(q, flip_fj(ctx, q));
    }
    case Task::Classification:
      return st.shape.eta * from_u64(unseen) / from_u64(st.shape.points);
    case Task::RealValued:
      return st.shape.loss->pair_floor(st.v) * from_u64(unseen) / from_u64(st.shape.points);
  }
  return Rational(0);
}

struct Acc {
  std::vector<std::vector<Rational>> expected;
  std::vector<std::vector<Rational>> tail;
  Rational bound_sum = 0;
};

Acc run_range(const Setup& st, std::span<const Learner> learners, const TaskLoss& loss, const Rational& threshold,
              bool want_bound, std::uint64_t begin, std::uint64_t end) {
  const std::size_t t = st.targets.size();
  Acc acc;
  acc.expected.assign(learners.size(), std::vector<Rational>(t, Rational(0)));
  acc.tail.assign(learners.size(), std::vector<Rational>(t, Rational(0)));
  std::vector<Rational> prob(t);
  for (std::uint64_t j = begin; j < end; ++j) {
    const auto digits = decode(j, st.alphabet.size(), st.m);
    bool any = false;
    for (std::size_t i = 0; i < t; ++i) {
      prob[i] = 1;
      for (auto d : digits) {
        prob[i] *= st.mass[i][d];
        if (sgn(prob[i]) == 0) break;
      }
      any = any || sgn(prob[i]) != 0;
    }
    if (!any) continue;
    if (want_bound) {
      for (std::size_t i = 0; i < t; ++i) {
        if (sgn(prob[i]) != 0) acc.bound_sum += prob[i] * pair_distance(st, i, digits);
      }
    }
    if (learners.empty()) continue;
    const AnySample s = make_sample(st, digits);
    for (std::size_t l = 0; l < learners.size(); ++l) {
      const Output out = learners[l](s);
      for (std::size_t i = 0; i < t; ++i) {
        if (sgn(prob[i]) == 0) continue;
        const Rational v = loss(out, st.targets[i]);
        acc.expected[l][i] += prob[i] * v;
        if (v >= threshold) acc.tail[l][i] += prob[i];
      }
    }
  }
  return acc;
}

Acc run(const Setup& st, std::span<const Learner> learners, const TaskLoss& loss, const Rational& threshold,
        bool want_bound, unsigned jobs) {
  const std::uint64_t total = to_u64(st.sequences);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::uint64_t>(total, 256))));
  std::vector<Acc> parts(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](unsigned w) {
    try {
      const std::uint64_t b = total * w / jobs, e = total * (w + 1) / jobs;
      parts[w] = run_range(st, learners, loss, threshold, want_bound, b, e);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  // exact sums, reduced in worker order
  Acc out = std::move(parts[0]);
  for (unsigned w = 1; w < jobs; ++w) {
    out.bound_sum += parts[w].bound_sum;
    for (std::size_t l = 0; l < out.expected.size(); ++l) {
      for (std::size_t i = 0; i < out.expected[l].size(); ++i) {
        out.expected[l][i] += parts[w].expected[l][i];
        out.tail[l][i] += parts[w].tail[l][i];
      }
    }
  }
  return out;
}

}  // namespace

BigInt sequence_count(const ClassHandle& family, std::uint64_t m) {
  const SubsetShape& s = require_shape(family);
  const Rational v = s.task == Task::RealValued ? s.loss->g_inverse(s.eta) : Rational(0);
  return power(alphabet_of(s, v).size(), m);
}

Rational symmetrized_lower_bound(const ClassHandle& family, std::uint64_t m, const ExactOptions& opt) {
  const Setup st = build(family, m, opt.budget);
  const TaskLoss loss = TaskLoss::for_class(family);
  const Acc acc = run(st, {}, loss, Rational(0), true, opt.jobs);
  return acc.bound_sum / (2 * from_u64(st.targets.size()));
}

ExactOracleReport nfl_exact(const ClassHandle& family, std::span<const Learner> learners, std::uint64_t m,
                            const ExactOptions& opt) {
  const Setup st = build(family, m, opt.budget);
  for (const auto& l : learners) {
    if (l.task() != st.shape.task) throw Error(Errc::MixedTasks, "learner '" + l.name() + "' targets another task");
  }
  const TaskLoss loss = TaskLoss::for_class(family);

  ExactOracleReport r;
  r.task = st.shape.task;
  r.eta = st.shape.eta;
  r.points = st.shape.points;
  r.filter = st.shape.filter;
  r.m = m;
  r.members = st.targets.size();
  r.sequences = st.sequences;
  r.eta_over_4 = st.shape.eta / 4;
  r.eta_over_8 = st.shape.eta / 8;
  r.threshold = r.eta_over_8;
  r.delta_fixed = Rational(1, 7);
  r.delta_consistent = markov_reverse(r.eta_over_4, r.threshold);

  const Acc acc = run(st, learners, loss, r.threshold, true, opt.jobs);
  const Rational t = from_u64(st.targets.size());
  r.bound = acc.bound_sum / (2 * t);
  for (std::size_t l = 0; l < learners.size(); ++l) {
    LearnerRisk lr;
    lr.learner = learners[l].name();
    lr.expected = acc.expected[l];
    lr.tail = acc.tail[l];
    lr.average = 0;
    lr.tail_average = 0;
    for (std::size_t i = 0; i < lr.expected.size(); ++i) {
      lr.average += lr.expected[i];
      lr.tail_average += lr.tail[i];
      if (i == 0 || lr.expected[i] > lr.max) lr.max = lr.expected[i];
      if (i == 0 || lr.tail[i] > lr.tail_max) lr.tail_max = lr.tail[i];
    }
    lr.average /= t;
    lr.tail_average /= t;
    lr.markov_average = markov_reverse(lr.average, r.threshold);
    lr.markov_max = markov_reverse(lr.max, r.threshold);
    r.learners.push_back(std::move(lr));
  }
  return r;
}

PairingAudit audit_pairing(const ClassHandle& family, std::uint64_t m, const ExactOptions& opt) {
  const Setup st = build(family, m, opt.budget);
  if (st.shape.task != Task::Distribution) throw Error(Errc::BadPrecondition, "pairing audit is for distributions");
  PairingAudit a;
  a.sequences = to_u64(st.sequences);
  for (std::uint64_t j = 0; j < a.sequences; ++j) {
    const auto digits = decode(j, st.alphabet.size(), m);
    Sample s;
    for (auto d : digits) s.atoms.push_back(st.alphabet[d].atom);
    const auto ctx = PairingContext::from_sample(s.atoms, st.shape.points);
    std::set<BigInt> images;
    std::uint64_t compatible = 0;
    for (std::size_t i = 0; i < st.targets.size(); ++i) {
      const auto& q = std::get<SparseDist>(st.targets[i]);
      const SparseDist f = flip_fj(ctx, q);
      Rational pq = 1, pf = 1;
      for (const Atom& x : s.atoms) {
        pq *= q.mass(x);
        pf *= f.mass(x);
      }
      ++a.measure_checks;
      if (pq != pf) ++a.measure_violations;

      const auto& set = st.subsets[i];
      if (!std::includes(set.begin(), set.end(), ctx.c.begin(), ctx.c.end())) continue;
      ++a.pairs;
      ++compatible;
      const auto g = pairing_gj(ctx, set);
      if (g.size() != set.size()) ++a.cardinality_violations;
      std::vector<std::uint64_t> both;
      std::set_intersection(set.begin(), set.end(), g.begin(), g.end(), std::back_inserter(both));
      if (both != ctx.c) ++a.intersection_violations;
      if (pairing_gj(ctx, g) != set) ++a.involution_violations;
      if (pairing_gj_inverse(ctx, g) != set) ++a.inverse_violations;
      try {
        const BigInt r = family.rank(g);
        if (family.dist(r) != f) ++a.family_violations;
        images.insert(r);
      } catch (const Error&) {
        ++a.family_violations;
      }
    }
    if (images.size() != compatible) ++a.bijection_violations;
  }
  return a;
}

}  // namespace pacnfl
