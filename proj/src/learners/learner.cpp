#include "pacnfl/learner.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "pacnfl/detail/overloaded.hpp"
#include "pacnfl/erm.hpp"
#include "pacnfl/error.hpp"
#include "pacnfl/scheffe.hpp"

namespace pacnfl {

using detail::overloaded;

std::size_t sample_size(const AnySample& s) {
  return std::visit([](const auto& v) { return v.size(); }, s);
}

Learner::Learner(std::string name, Task task, int alpha, Fn fn, std::optional<LossSpec> loss)
    : name_(std::move(name)), task_(task), alpha_(alpha), fn_(std::move(fn)), loss_(std::move(loss)) {
  if (task_ == Task::RealValued && !loss_) throw Error(Errc::BadPrecondition, "real-valued learner needs a loss");
}

namespace {

int alpha_of(Task t) { return t == Task::Distribution ? 3 : 1; }

const Sample& atoms_of(const AnySample& s) {
  if (const auto* p = std::get_if<Sample>(&s)) return *p;
  throw Error(Errc::MixedTasks, "expected an atom sample, got a real-valued sample");
}

const RealSample& points_of(const AnySample& s) {
  if (const auto* p = std::get_if<RealSample>(&s)) return *p;
  throw Error(Errc::MixedTasks, "expected a real-valued sample");
}

Learner finite_learner(std::string name, const ClassHandle& cls, std::uint64_t budget) {
  switch (cls.task()) {
    case Task::Distribution: {
      auto sel = std::make_shared<const ScheffeSelector>(cls.distributions(budget));
      return Learner(std::move(name), Task::Distribution, 3,
                     [sel](const AnySample& s) -> Output { return (*sel)(atoms_of(s)); });
    }
    case Task::Classification: {
      const auto q = cls.distributions(budget);
      auto hyps = std::make_shared<const std::vector<BinaryHypothesis>>(hypotheses_of(q));
      if (hyps->empty()) throw Error(Errc::EmptyClass, "ERM over an empty class");
      return Learner(std::move(name), Task::Classification, 1, [hyps](const AnySample& s) -> Output {
        return (*hyps)[erm_index(*hyps, atoms_of(s))];
      });
    }
    case Task::RealValued: {
      auto hyps = std::make_shared<const std::vector<RealHypothesis>>(cls.hypotheses(budget));
      if (hyps->empty()) throw Error(Errc::EmptyClass, "ERM over an empty class");
      const LossSpec loss = *cls.loss();
      return Learner(
          std::move(name), Task::RealValued, 1,
          [hyps, loss](const AnySample& s) -> Output { return (*hyps)[erm_index(*hyps, points_of(s), loss)]; }, loss);
    }
  }
  throw Error(Errc::BadPrecondition, "unknown task");
}

SparseDist empirical_distribution(const Sample& s) {
  if (s.empty()) throw Error(Errc::EmptySample, "empirical distribution of an empty sample");
  std::map<Atom, std::uint64_t> counts;
  for (const Atom& a : s.atoms) ++counts[a];
  std::vector<SparseDist::Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [a, c] : counts) entries.emplace_back(a, ratio(static_cast<std::int64_t>(c), s.size()));
  return SparseDist(std::move(entries), "empirical");
}

BinaryHypothesis plurality_labeler(const Sample& s) {
  std::map<std::uint64_t, std::int64_t> balance;
  for (const Atom& a : s.atoms) balance[a.value] += a.bit() ? 1 : -1;
  std::vector<std::uint64_t> ones;
  for (const auto& [x, b] : balance) {
    if (b > 0) ones.push_back(x);
  }
  return BinaryHypothesis(std::move(ones));
}

RealHypothesis plurality_values(const RealSample& s) {
  std::map<std::uint64_t, std::map<Rational, std::uint64_t>> counts;
  for (const auto& p : s.points) ++counts[p.x][p.y];
  std::vector<RealHypothesis::Entry> values;
  for (const auto& [x, by_y] : counts) {
    const Rational* best = nullptr;
    std::uint64_t best_count = 0;
    for (const auto& [y, c] : by_y) {
      if (c > best_count) {
        best = &y;
        best_count = c;
      }
    }
    values.emplace_back(x, *best);
  }
  return RealHypothesis(std::move(values));
}

template <class S, class Items>
std::pair<AnySample, AnySample> split_items(const S& s, const Items& items, Items S::*field) {
  S a, b;
  a.provenance = s.provenance;
  b.provenance = s.provenance;
  const auto half = static_cast<std::ptrdiff_t>((items.size() + 1) / 2);
  (a.*field).assign(items.begin(), items.begin() + half);
  (b.*field).assign(items.begin() + half, items.end());
  return {std::move(a), std::move(b)};
}

std::pair<AnySample, AnySample> split(const AnySample& s) {
  if (const auto* p = std::get_if<Sample>(&s)) return split_items(*p, p->atoms, &Sample::atoms);
  const auto& r = std::get<RealSample>(s);
  return split_items(r, r.points, &RealSample::points);
}

double ln(const Rational& r) { return std::log(to_double(r)); }

double ln_big(const BigInt& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

void check_eps_delta(const Rational& eps, const Rational& delta) {
  if (sgn(eps) <= 0) throw Error(Errc::BadRange, "eps must be > 0");
  if (sgn(delta) <= 0 || delta >= 1) throw Error(Errc::BadRange, "delta must lie in (0,1)");
}

std::uint64_t ceil_u64(double v) {
  if (!(v < 1.8e19)) throw Error(Errc::BadRange, "sample size overflows 64 bits");
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

Learner scheffe_learner(const ClassHandle& cls, std::uint64_t budget) {
  if (cls.task() == Task::RealValued) throw Error(Errc::BadPrecondition, "Scheffe selection needs distributions");
  auto sel = std::make_shared<const ScheffeSelector>(cls.distributions(budget));
  return Learner("scheffe", cls.task(), alpha_of(cls.task()),
                 [sel](const AnySample& s) -> Output { return (*sel)(atoms_of(s)); });
}

Learner truncation_learner(const ClassHandle& staged, const Rational& eps, std::uint64_t budget) {
  return finite_learner("truncation", staged.truncate(eps, budget), budget);
}

Learner erm_learner(const ClassHandle& cls, std::uint64_t budget) {
  if (cls.task() == Task::Distribution) throw Error(Errc::BadPrecondition, "ERM needs a hypothesis task");
  return finite_learner("erm", cls, budget);
}

Learner empirical_baseline(Task task, std::optional<LossSpec> loss) {
  switch (task) {
    case Task::Distribution:
      return Learner("empirical-baseline", task, 3,
                     [](const AnySample& s) -> Output { return empirical_distribution(atoms_of(s)); });
    case Task::Classification:
      return Learner("empirical-baseline", task, 1,
                     [](const AnySample& s) -> Output { return plurality_labeler(atoms_of(s)); });
    case Task::RealValued:
      return Learner(
          "empirical-baseline", task, 1, [](const AnySample& s) -> Output { return plurality_values(points_of(s)); },
          std::move(loss));
  }
  throw Error(Errc::BadPrecondition, "unknown task");
}

Learner constant_learner(Output out, Task task, std::optional<LossSpec> loss) {
  auto shared = std::make_shared<const Output>(std::move(out));
  return Learner(
      "constant", task, alpha_of(task), [shared](const AnySample&) -> Output { return *shared; }, std::move(loss));
}

static void check_compatible(std::span<const Learner> learners) {
  const Task task = learners.front().task();
  for (const auto& l : learners) {
    if (l.task() != task) throw Error(Errc::MixedTasks, "learners '" + learners.front().name() + "' and '" + l.name() +
                                                            "' target different tasks");
    if (task == Task::RealValued && l.loss() != learners.front().loss()) {
      throw Error(Errc::MixedTasks, "learners use different losses");
    }
  }
}

Learner union_learner(std::vector<Learner> learners) {
  if (learners.empty()) throw Error(Errc::EmptyList, "union of no learners");
  check_compatible(learners);
  auto shared = std::make_shared<const std::vector<Learner>>(std::move(learners));
  const Task task = shared->front().task();
  const auto loss = shared->front().loss();
  return Learner(
      "union", task, alpha_of(task), [shared](const AnySample& s) { return union_aggregate(*shared, s); }, loss);
}

SparseDist truncation_learn(const ClassHandle& staged, const Rational& eps, const Sample& s, std::uint64_t budget) {
  if (staged.task() != Task::Distribution) throw Error(Errc::BadPrecondition, "truncation_learn is for distributions");
  return scheffe(staged.truncate(eps, budget), s, budget);
}

Output union_aggregate(std::span<const Learner> learners, const AnySample& s) {
  if (learners.empty()) throw Error(Errc::EmptyList, "union of no learners");
  check_compatible(learners);
  const Task task = learners.front().task();
  if (sample_size(s) < 2) throw Error(Errc::SampleTooSmall, "union aggregation needs at least 2 points");
  auto [first, second] = split(s);

  std::vector<Output> candidates;
  candidates.reserve(learners.size());
  for (const auto& l : learners) candidates.push_back(l(first));

  switch (task) {
    case Task::Distribution: {
      std::vector<SparseDist> q;
      for (auto& c : candidates) q.push_back(std::get<SparseDist>(std::move(c)));
      ScheffeSelector sel(std::move(q));
      return sel(std::get<Sample>(second));
    }
    case Task::Classification: {
      std::vector<BinaryHypothesis> h;
      for (auto& c : candidates) {
        std::visit(overloaded{
                       [&](BinaryHypothesis& b) { h.push_back(std::move(b)); },
                       [&](SparseDist& q) { h.push_back(induced_classifier(q)); },
                       [&](RealHypothesis&) { throw Error(Errc::MixedTasks, "real-valued candidate"); },
                   },
                   c);
      }
      return h[erm_index(h, std::get<Sample>(second))];
    }
    case Task::RealValued: {
      std::vector<RealHypothesis> h;
      for (auto& c : candidates) h.push_back(std::get<RealHypothesis>(std::move(c)));
      return h[erm_index(h, std::get<RealSample>(second), *learners.front().loss())];
    }
  }
  throw Error(Errc::BadPrecondition, "unknown task");
}

std::uint64_t scheffe_m_for(const BigInt& class_size, const Rational& eps, const Rational& delta) {
  check_eps_delta(eps, delta);
  if (sgn(class_size) <= 0) throw Error(Errc::EmptyClass, "class size must be >= 1");
  const double e = to_double(eps) / 4;
  return ceil_u64((std::log(3.0) + 2 * ln_big(class_size) - ln(delta)) / (2 * e * e));
}

std::uint64_t truncation_m_for(const SequenceSpec& spec, const Rational& eps, const Rational& delta) {
  check_eps_delta(eps, delta);
  const std::uint64_t i = spec.eta_inverse(eps / 4);
  const BigInt prod = from_u64_big(i) * from_u64_big(spec.n_max(i));
  const double e = to_double(eps);
  return ceil_u64(128 * (std::log(3.0) + 2 * ln_big(prod) - ln(delta)) / (e * e));
}

std::uint64_t finite_erm_m_for(const BigInt& class_size, const Rational& eps, const Rational& delta) {
  check_eps_delta(eps, delta);
  if (sgn(class_size) <= 0) throw Error(Errc::EmptyClass, "class size must be >= 1");
  const double e = to_double(eps);
  return ceil_u64(2 * (std::log(2.0) + ln_big(class_size) - ln(delta)) / (e * e));
}

std::uint64_t union_m_for(std::uint64_t k, const Rational& eps, const Rational& delta) {
  check_eps_delta(eps, delta);
  if (k == 0) throw Error(Errc::EmptyList, "union of no learners");
  const double e = to_double(eps);
  return ceil_u64(4 * (std::log(static_cast<double>(k)) + std::log(2.0) - ln(delta)) / (e * e));
}

}  // namespace pacnfl
