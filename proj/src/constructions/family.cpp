#include "pacnfl/family.hpp"

#include <algorithm>

#include "pacnfl/detail/overloaded.hpp"
#include "pacnfl/error.hpp"

namespace pacnfl {

namespace {

using detail::overloaded;

struct SubsetRep {
  SubsetShape shape;
};

struct ExplicitRep {
  Task task;
  std::vector<Member> members;
  std::optional<SparseDist> marginal;
  std::string name;
};

struct StagedRep {
  Task task;
  SequenceSpec spec;
  std::optional<LossSpec> loss;

  Rational cap() const { return task == Task::RealValued ? loss->g_max() : Rational(1); }
};

struct TruncatedRep {
  StagedRep staged;
  Rational eps;
  std::uint64_t last = 0;
  // starts[s - 1] is the flat index of the first member of stage s;
  // starts[last] is the total size.
  std::vector<BigInt> starts;
};

}  // namespace

struct ClassHandle::Rep {
  std::variant<SubsetRep, ExplicitRep, StagedRep, TruncatedRep> v;
};

std::string_view task_name(Task t) {
  switch (t) {
    case Task::Distribution:
      return "distribution";
    case Task::Classification:
      return "classification";
    case Task::RealValued:
      return "real-valued";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  if (text == "distribution") return Task::Distribution;
  if (text == "classification") return Task::Classification;
  if (text == "real-valued") return Task::RealValued;
  throw Error(Errc::ConfigError, "unknown task '" + std::string(text) + "'");
}

std::vector<std::uint64_t> unrank_subset(const BigInt& ordinal, std::uint64_t n, std::uint64_t r) {
  if (r > n) throw Error(Errc::BadRange, "subset size exceeds base");
  if (sgn(ordinal) < 0 || ordinal >= binomial(n, r)) throw Error(Errc::BadRange, "subset ordinal out of range");
  std::vector<std::uint64_t> out(r);
  BigInt rest = ordinal;
  std::uint64_t c = n;
  for (std::uint64_t k = r; k >= 1; --k) {
    // largest c with C(c, k) <= rest
    do {
      --c;
    } while (binomial(c, k) > rest);
    out[k - 1] = c + 1;
    rest -= binomial(c, k);
  }
  return out;
}

BigInt rank_subset(std::span<const std::uint64_t> subset) {
  BigInt r = 0;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] == 0 || (k > 0 && subset[k] <= subset[k - 1])) {
      throw Error(Errc::BadPrecondition, "subset must be ascending within {1..n}");
    }
    r += binomial(subset[k] - 1, k + 1);
  }
  return r;
}

namespace {

BigInt pow2(std::uint64_t n) {
  BigInt z;
  mpz_ui_pow_ui(z.get_mpz_t(), 2, n);
  return z;
}

std::string set_text(std::span<const std::uint64_t> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

BigInt subset_size(const SubsetShape& s) {
  if (s.filter) return binomial(s.points, *s.filter);
  if (s.task == Task::Distribution) return pow2(s.points) - 1;
  return pow2(s.points);
}

void check_ordinal(const BigInt& ordinal, const BigInt& size) {
  if (sgn(ordinal) < 0 || ordinal >= size) {
    throw Error(Errc::BadRange, "member ordinal " + to_string(ordinal) + " outside [0, " + to_string(size) + ")");
  }
}

std::vector<std::uint64_t> mask_elements(const BigInt& mask) {
  std::vector<std::uint64_t> out;
  const std::size_t bits = mpz_sizeinbase(mask.get_mpz_t(), 2);
  for (std::size_t b = 0; b < bits; ++b) {
    if (mpz_tstbit(mask.get_mpz_t(), b)) out.push_back(b + 1);
  }
  return out;
}

std::vector<std::uint64_t> shape_subset(const SubsetShape& s, const BigInt& ordinal) {
  check_ordinal(ordinal, subset_size(s));
  if (s.filter) return unrank_subset(ordinal, s.points, *s.filter);
  if (s.task == Task::Distribution) return mask_elements(ordinal + 1);
  return mask_elements(ordinal);
}

BigInt shape_rank(const SubsetShape& s, std::span<const std::uint64_t> subset) {
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] == 0 || subset[k] > s.points || (k > 0 && subset[k] <= subset[k - 1])) {
      throw Error(Errc::BadPrecondition, "subset " + set_text(subset) + " is not an ascending subset of {1.." +
                                             std::to_string(s.points) + "}");
    }
  }
  if (s.filter) {
    if (subset.size() != *s.filter) {
      throw Error(Errc::BadPrecondition, "subset " + set_text(subset) + " violates |A| = " + std::to_string(*s.filter));
    }
    return rank_subset(subset);
  }
  BigInt mask = 0;
  for (auto x : subset) mpz_setbit(mask.get_mpz_t(), x - 1);
  if (s.task == Task::Distribution) {
    if (subset.empty()) throw Error(Errc::BadPrecondition, "empty A is not a member");
    return mask - 1;
  }
  return mask;
}

std::string shape_name(const SubsetShape& s) {
  const std::string e = to_string(s.eta);
  switch (s.task) {
    case Task::Distribution: {
      std::string name = "P[" + e + "," + std::to_string(s.points) + "]";
      if (s.filter) name += "|A|=" + std::to_string(*s.filter);
      return name;
    }
    case Task::Classification:
      return "P01[" + e + "," + std::to_string(s.points / 2) + "]";
    case Task::RealValued:
      return "F[" + s.loss->name() + "," + e + "," + std::to_string(s.points) + "]";
  }
  return "?";
}

Member shape_member(const SubsetShape& s, const BigInt& ordinal) {
  const auto set = shape_subset(s, ordinal);
  const std::string tag = shape_name(s) + set_text(set);
  switch (s.task) {
    case Task::Distribution: {
      std::vector<SparseDist::Entry> entries;
      entries.reserve(set.size() + 1);
      entries.emplace_back(Atom::plain(0), 1 - s.eta);
      const Rational w = s.eta / from_u64(set.size());
      for (auto x : set) entries.emplace_back(Atom::plain(x), w);
      return SparseDist(std::move(entries), tag);
    }
    case Task::Classification: {
      std::vector<SparseDist::Entry> entries;
      entries.reserve(s.points + 1);
      entries.emplace_back(Atom::labeled(0, 0), 1 - s.eta);
      const Rational w = s.eta / from_u64(s.points);
      std::size_t j = 0;
      for (std::uint64_t x = 1; x <= s.points; ++x) {
        const bool one = j < set.size() && set[j] == x;
        if (one) ++j;
        entries.emplace_back(Atom::labeled(x, one ? 1 : 0), w);
      }
      return SparseDist(std::move(entries), tag);
    }
    case Task::RealValued: {
      const Rational v = s.loss->g_inverse(s.eta);
      std::vector<RealHypothesis::Entry> values;
      values.reserve(set.size());
      for (auto x : set) values.emplace_back(x, v);
      return RealHypothesis(std::move(values));
    }
  }
  throw Error(Errc::BadPrecondition, "unknown task");
}

SparseDist uniform_prefix(std::uint64_t n) {
  std::vector<SparseDist::Entry> entries;
  entries.reserve(n);
  const Rational w = ratio(1, n);
  for (std::uint64_t x = 1; x <= n; ++x) entries.emplace_back(Atom::plain(x), w);
  return SparseDist(std::move(entries), "U{1.." + std::to_string(n) + "}");
}

SubsetShape stage_shape(const StagedRep& st, std::uint64_t i) {
  SubsetShape s;
  s.task = st.task;
  s.eta = st.spec.stage_eta(i, st.cap());
  const std::uint64_t n = st.spec.n(i);
  s.points = st.task == Task::Classification ? 2 * n : n;
  s.loss = st.loss;
  return s;
}

Member anchor(const StagedRep& st) {
  switch (st.task) {
    case Task::Distribution:
      return SparseDist::point(Atom::plain(0), "delta_0");
    case Task::Classification:
      return SparseDist::point(Atom::labeled(0, 0), "delta_(0,0)");
    case Task::RealValued:
      return RealHypothesis{};
  }
  throw Error(Errc::BadPrecondition, "unknown task");
}

template <class Rep>
const Rep* as(const ClassHandle::Rep& r) {
  return std::get_if<Rep>(&r.v);
}

}  // namespace

Task ClassHandle::task() const {
  return std::visit(overloaded{
                        [](const SubsetRep& r) { return r.shape.task; },
                        [](const ExplicitRep& r) { return r.task; },
                        [](const StagedRep& r) { return r.task; },
                        [](const TruncatedRep& r) { return r.staged.task; },
                    },
                    rep_->v);
}

bool ClassHandle::is_finite() const { return !is_staged(); }
bool ClassHandle::is_staged() const { return as<StagedRep>(*rep_) != nullptr; }
bool ClassHandle::is_truncated() const { return as<TruncatedRep>(*rep_) != nullptr; }

BigInt ClassHandle::size() const {
  return std::visit(overloaded{
                        [](const SubsetRep& r) { return subset_size(r.shape); },
                        [](const ExplicitRep& r) { return from_u64_big(r.members.size()); },
                        [](const StagedRep&) -> BigInt {
                          throw Error(Errc::BadRange, "staged union is countably infinite");
                        },
                        [](const TruncatedRep& r) { return r.starts.back(); },
                    },
                    rep_->v);
}

std::string ClassHandle::size_text() const { return is_staged() ? "countably infinite" : to_string(size()); }

Member ClassHandle::materialize(const BigInt& ordinal) const {
  return std::visit(overloaded{
                        [&](const SubsetRep& r) { return shape_member(r.shape, ordinal); },
                        [&](const ExplicitRep& r) {
                          check_ordinal(ordinal, from_u64_big(r.members.size()));
                          return r.members[to_u64(ordinal)];
                        },
                        [&](const StagedRep&) -> Member {
                          throw Error(Errc::BadPrecondition, "staged members need a (stage, ordinal) index");
                        },
                        [&](const TruncatedRep& r) {
                          const MemberIndex at = origin(ordinal);
                          if (at.stage == 0) return anchor(r.staged);
                          return shape_member(stage_shape(r.staged, at.stage), at.ordinal);
                        },
                    },
                    rep_->v);
}

Member ClassHandle::materialize(const MemberIndex& index) const {
  if (index.stage == 0) return materialize(index.ordinal);
  if (const auto* st = as<StagedRep>(*rep_)) return shape_member(stage_shape(*st, index.stage), index.ordinal);
  if (const auto* tr = as<TruncatedRep>(*rep_)) {
    if (index.stage > tr->last) throw Error(Errc::BadRange, "stage beyond truncation");
    return shape_member(stage_shape(tr->staged, index.stage), index.ordinal);
  }
  throw Error(Errc::BadPrecondition, "class is not staged");
}

SparseDist ClassHandle::dist(const BigInt& ordinal) const {
  Member m = materialize(ordinal);
  if (auto* p = std::get_if<SparseDist>(&m)) return std::move(*p);
  throw Error(Errc::BadPrecondition, "member is a hypothesis, not a distribution");
}

RealHypothesis ClassHandle::hypothesis(const BigInt& ordinal) const {
  Member m = materialize(ordinal);
  if (auto* h = std::get_if<RealHypothesis>(&m)) return std::move(*h);
  throw Error(Errc::BadPrecondition, "member is a distribution, not a hypothesis");
}

std::vector<Member> ClassHandle::enumerate(std::uint64_t budget) const {
  const BigInt n = size();
  if (n > from_u64_big(budget)) {
    throw Error(Errc::ClassTooLarge, "class has " + to_string(n) + " members, budget " + std::to_string(budget));
  }
  if (const auto* ex = as<ExplicitRep>(*rep_)) return ex->members;
  std::vector<Member> out;
  const std::uint64_t count = to_u64(n);
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(materialize(from_u64_big(i)));
  return out;
}

std::vector<SparseDist> ClassHandle::distributions(std::uint64_t budget) const {
  if (task() == Task::RealValued) throw Error(Errc::BadPrecondition, "real-valued class holds hypotheses");
  std::vector<SparseDist> out;
  for (auto& m : enumerate(budget)) out.push_back(std::get<SparseDist>(std::move(m)));
  return out;
}

std::vector<RealHypothesis> ClassHandle::hypotheses(std::uint64_t budget) const {
  if (task() != Task::RealValued) throw Error(Errc::BadPrecondition, "class holds distributions");
  std::vector<RealHypothesis> out;
  for (auto& m : enumerate(budget)) out.push_back(std::get<RealHypothesis>(std::move(m)));
  return out;
}

std::optional<SparseDist> ClassHandle::marginal() const {
  if (task() != Task::RealValued) return std::nullopt;
  return std::visit(overloaded{
                        [](const SubsetRep& r) -> std::optional<SparseDist> { return uniform_prefix(r.shape.points); },
                        [](const ExplicitRep& r) { return r.marginal; },
                        [](const StagedRep&) -> std::optional<SparseDist> { return std::nullopt; },
                        [](const TruncatedRep& r) -> std::optional<SparseDist> {
                          return uniform_prefix(r.staged.spec.n_max(std::max<std::uint64_t>(r.last, 1)));
                        },
                    },
                    rep_->v);
}

RealTarget ClassHandle::real_target(const BigInt& ordinal) const {
  auto m = marginal();
  if (!m) throw Error(Errc::BadPrecondition, "class has no marginal for real-valued targets");
  return RealTarget{std::move(*m), hypothesis(ordinal)};
}

const SubsetShape* ClassHandle::shape() const {
  if (const auto* r = as<SubsetRep>(*rep_)) return &r->shape;
  return nullptr;
}

std::vector<std::uint64_t> ClassHandle::subset(const BigInt& ordinal) const {
  const auto* s = shape();
  if (!s) throw Error(Errc::BadPrecondition, "class is not subset-indexed");
  return shape_subset(*s, ordinal);
}

BigInt ClassHandle::rank(std::span<const std::uint64_t> subset) const {
  const auto* s = shape();
  if (!s) throw Error(Errc::BadPrecondition, "class is not subset-indexed");
  return shape_rank(*s, subset);
}

const SequenceSpec& ClassHandle::sequence() const {
  if (const auto* st = as<StagedRep>(*rep_)) return st->spec;
  if (const auto* tr = as<TruncatedRep>(*rep_)) return tr->staged.spec;
  throw Error(Errc::BadPrecondition, "class is not staged");
}

std::optional<LossSpec> ClassHandle::loss() const {
  return std::visit(overloaded{
                        [](const SubsetRep& r) { return r.shape.loss; },
                        [](const ExplicitRep&) -> std::optional<LossSpec> { return std::nullopt; },
                        [](const StagedRep& r) { return r.loss; },
                        [](const TruncatedRep& r) { return r.staged.loss; },
                    },
                    rep_->v);
}

ClassHandle ClassHandle::stage(std::uint64_t i) const {
  const StagedRep* st = as<StagedRep>(*rep_);
  if (!st) {
    if (const auto* tr = as<TruncatedRep>(*rep_)) st = &tr->staged;
  }
  if (!st) throw Error(Errc::BadPrecondition, "class is not staged");
  return ClassHandle(std::make_shared<Rep>(Rep{SubsetRep{stage_shape(*st, i)}}));
}

ClassHandle ClassHandle::truncate(const Rational& eps, std::uint64_t budget) const {
  const auto* st = as<StagedRep>(*rep_);
  if (!st) throw Error(Errc::BadPrecondition, "only staged unions can be truncated");
  TruncatedRep tr{*st, eps, st->spec.eta_inverse(eps / 4), {}};
  const BigInt limit = from_u64_big(budget);
  BigInt total = 1;
  tr.starts.reserve(tr.last + 1);
  for (std::uint64_t s = 1; s <= tr.last; ++s) {
    tr.starts.push_back(total);
    total += subset_size(stage_shape(*st, s));
    if (total > limit) {
      throw Error(Errc::ClassTooLarge, "truncation at eps=" + to_string(eps) + " keeps stages 1.." +
                                           std::to_string(tr.last) + ", more than " + std::to_string(budget) +
                                           " members (exceeded at stage " + std::to_string(s) + ")");
    }
  }
  tr.starts.push_back(total);
  return ClassHandle(std::make_shared<Rep>(Rep{std::move(tr)}));
}

std::uint64_t ClassHandle::last_stage() const {
  if (const auto* tr = as<TruncatedRep>(*rep_)) return tr->last;
  throw Error(Errc::BadPrecondition, "class is not truncated");
}

MemberIndex ClassHandle::origin(const BigInt& flat) const {
  const auto* tr = as<TruncatedRep>(*rep_);
  if (!tr) return MemberIndex{0, flat};
  check_ordinal(flat, tr->starts.back());
  if (sgn(flat) == 0) return MemberIndex{0, BigInt(0)};
  auto it = std::upper_bound(tr->starts.begin(), tr->starts.end(), flat);
  const std::uint64_t s = static_cast<std::uint64_t>(it - tr->starts.begin());
  return MemberIndex{s, flat - tr->starts[s - 1]};
}

std::string ClassHandle::describe() const {
  return std::visit(overloaded{
                        [](const SubsetRep& r) { return shape_name(r.shape); },
                        [](const ExplicitRep& r) {
                          return r.name.empty() ? "explicit(" + std::to_string(r.members.size()) + ")" : r.name;
                        },
                        [](const StagedRep& r) {
                          return "union[" + std::string(task_name(r.task)) + "; " + r.spec.describe() + "]";
                        },
                        [](const TruncatedRep& r) {
                          return "union[" + std::string(task_name(r.staged.task)) + "; " + r.staged.spec.describe() +
                                 "] truncated at eps=" + to_string(r.eps) + " (stages 1.." + std::to_string(r.last) +
                                 ")";
                        },
                    },
                    rep_->v);
}

ClassHandle p_eta_n(const Rational& eta, std::uint64_t n, std::optional<std::uint64_t> filter) {
  if (sgn(eta) <= 0 || eta > 1) throw Error(Errc::BadEta, "eta must lie in (0,1], got " + to_string(eta));
  if (n < 1) throw Error(Errc::BadN, "n must be >= 1");
  if (filter && (*filter < 1 || *filter > n)) {
    throw Error(Errc::BadPrecondition, "filter |A| = " + std::to_string(*filter) + " outside 1.." + std::to_string(n));
  }
  return ClassHandle(std::make_shared<ClassHandle::Rep>(
      ClassHandle::Rep{SubsetRep{SubsetShape{Task::Distribution, eta, n, filter, std::nullopt}}}));
}

ClassHandle classification_stage(const Rational& eta, std::uint64_t n) {
  if (sgn(eta) <= 0 || eta > 1) throw Error(Errc::BadEta, "eta must lie in (0,1], got " + to_string(eta));
  if (n < 1) throw Error(Errc::BadN, "n must be >= 1");
  return ClassHandle(std::make_shared<ClassHandle::Rep>(
      ClassHandle::Rep{SubsetRep{SubsetShape{Task::Classification, eta, 2 * n, std::nullopt, std::nullopt}}}));
}

ClassHandle f_class(const LossSpec& loss, const Rational& eta, std::uint64_t n) {
  if (sgn(eta) <= 0) throw Error(Errc::BadEta, "eta must be > 0, got " + to_string(eta));
  if (eta > loss.g_max()) {
    throw Error(Errc::EtaAboveGmax, "eta " + to_string(eta) + " above g_max " + to_string(loss.g_max()));
  }
  if (n < 1) throw Error(Errc::BadN, "n must be >= 1");
  return ClassHandle(std::make_shared<ClassHandle::Rep>(
      ClassHandle::Rep{SubsetRep{SubsetShape{Task::RealValued, eta, n, std::nullopt, loss}}}));
}

ClassHandle stage_union(Task task, SequenceSpec spec, std::optional<LossSpec> loss) {
  if (task == Task::RealValued && !loss) throw Error(Errc::BadPrecondition, "real-valued union needs a loss");
  if (task != Task::RealValued) loss.reset();
  return ClassHandle(std::make_shared<ClassHandle::Rep>(ClassHandle::Rep{StagedRep{task, std::move(spec), loss}}));
}

ClassHandle explicit_class(Task task, std::vector<Member> members, std::optional<SparseDist> marginal,
                           std::string name) {
  for (const auto& m : members) {
    if (task == Task::RealValued) {
      if (!std::holds_alternative<RealHypothesis>(m)) throw Error(Errc::MixedTasks, "expected hypotheses");
      continue;
    }
    const auto* p = std::get_if<SparseDist>(&m);
    if (!p) throw Error(Errc::MixedTasks, "expected distributions");
    for (const auto& [a, w] : p->entries()) {
      if (a.is_labeled() != (task == Task::Classification)) {
        throw Error(Errc::MixedTasks, "atom " + to_string(a) + " does not fit the " + std::string(task_name(task)) +
                                          " task");
      }
    }
  }
  if (marginal && task != Task::RealValued) marginal.reset();
  return ClassHandle(std::make_shared<ClassHandle::Rep>(
      ClassHandle::Rep{ExplicitRep{task, std::move(members), std::move(marginal), std::move(name)}}));
}

}  // namespace pacnfl
