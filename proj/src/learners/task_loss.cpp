#include "pacnfl/task_loss.hpp"

#include "pacnfl/detail/overloaded.hpp"
#include "pacnfl/erm.hpp"
#include "pacnfl/error.hpp"

namespace pacnfl {

using detail::overloaded;

Rational loss_01(const BinaryHypothesis& h, const SparseDist& p) {
  Rational total = 0;
  for (const auto& [a, w] : p.entries()) {
    if (!a.is_labeled()) throw Error(Errc::BadPrecondition, "0/1 loss needs labeled atoms, got " + to_string(a));
    if (h(a.value) != a.bit()) total += w;
  }
  return total;
}

BinaryHypothesis bayes_classifier(const SparseDist& p) {
  std::vector<std::uint64_t> ones;
  for (const auto& [a, w] : p.entries()) {
    if (a.label == Label::One && w > p.mass(Atom::labeled(a.value, 0))) ones.push_back(a.value);
  }
  return BinaryHypothesis(std::move(ones));
}

Rational bayes_loss(const SparseDist& p) { return loss_01(bayes_classifier(p), p); }

Rational excess_01(const BinaryHypothesis& h, const SparseDist& p) { return loss_01(h, p) - bayes_loss(p); }

Rational loss_g(const RealHypothesis& h, const RealTarget& target, const LossSpec& loss) {
  Rational total = 0;
  Rational diff;
  for (const auto& [a, w] : target.marginal.entries()) {
    diff = h(a.value) - target.labeler(a.value);
    if (sgn(diff) < 0) diff = -diff;
    total += w * loss.g(diff);
  }
  return total;
}

TaskLoss::TaskLoss(Task task, std::optional<LossSpec> loss) : task_(task), loss_(std::move(loss)) {
  if (task_ == Task::RealValued && !loss_) throw Error(Errc::BadPrecondition, "real-valued task needs a loss");
}

namespace {

template <class T, class V>
const T& expect(const V& v, const char* what) {
  if (const T* p = std::get_if<T>(&v)) return *p;
  throw Error(Errc::MixedTasks, std::string(what) + " does not match the task");
}

}  // namespace

Rational TaskLoss::operator()(const Output& out, const Target& target) const {
  switch (task_) {
    case Task::Distribution:
      return tv(expect<SparseDist>(out, "output"), expect<SparseDist>(target, "target"));
    case Task::Classification: {
      const auto& p = expect<SparseDist>(target, "target");
      return std::visit(overloaded{
                            [&](const BinaryHypothesis& h) { return excess_01(h, p); },
                            [&](const SparseDist& q) { return excess_01(induced_classifier(q), p); },
                            [&](const RealHypothesis&) -> Rational {
                              throw Error(Errc::MixedTasks, "real-valued output for a classification target");
                            },
                        },
                        out);
    }
    case Task::RealValued:
      return loss_g(expect<RealHypothesis>(out, "output"), expect<RealTarget>(target, "target"), *loss_);
  }
  throw Error(Errc::BadPrecondition, "unknown task");
}

Rational loss_eval(const TaskLoss& loss, const Output& out, const Target& target) { return loss(out, target); }

Target target_of(const ClassHandle& cls, const BigInt& ordinal) {
  if (cls.task() == Task::RealValued) return cls.real_target(ordinal);
  return cls.dist(ordinal);
}

OptResult opt_loss(const ClassHandle& cls, const Target& target, std::uint64_t budget) {
  const TaskLoss loss = TaskLoss::for_class(cls);
  const auto members = cls.enumerate(budget);
  if (members.empty()) throw Error(Errc::EmptyClass, "opt over an empty class");
  OptResult r;
  for (std::size_t i = 0; i < members.size(); ++i) {
    Output out = std::visit(overloaded{
                                [](const SparseDist& p) -> Output { return p; },
                                [](const RealHypothesis& h) -> Output { return h; },
                            },
                            members[i]);
    Rational v = loss(out, target);
    if (i == 0 || v < r.value) {
      r.value = std::move(v);
      r.witness = from_u64_big(i);
    }
  }
  if (cls.task() == Task::Classification) {
    const auto& p = std::get<SparseDist>(target);
    r.bayes = bayes_classifier(p);
    r.bayes_value = loss_01(*r.bayes, p);
  }
  return r;
}

}  // namespace pacnfl
