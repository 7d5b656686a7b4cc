#pragma once

#include <optional>
#include <variant>

#include "pacnfl/dist.hpp"
#include "pacnfl/family.hpp"
#include "pacnfl/hypothesis.hpp"
#include "pacnfl/loss.hpp"

namespace pacnfl {

/// What a learner returns.
using Output = std::variant<SparseDist, BinaryHypothesis, RealHypothesis>;
/// What the data comes from: a distribution (distribution and
/// classification tasks) or a marginal plus labeling function.
using Target = std::variant<SparseDist, RealTarget>;

/// 0/1 risk sum_{(x,y)} p(x,y) 1{h(x) != y} over labeled atoms.
Rational loss_01(const BinaryHypothesis& h, const SparseDist& p);
/// Label with the larger mass at each x; ties go to 0.
BinaryHypothesis bayes_classifier(const SparseDist& p);
Rational bayes_loss(const SparseDist& p);
Rational excess_01(const BinaryHypothesis& h, const SparseDist& p);

/// sum_x D(x) g(|h(x) - f(x)|)
Rational loss_g(const RealHypothesis& h, const RealTarget& target, const LossSpec& loss);

/// TV for distributions, excess 0/1 risk for classification, L^g for the
/// real-valued task. Always in [0, 1].
class TaskLoss {
 public:
  explicit TaskLoss(Task task, std::optional<LossSpec> loss = {});
  static TaskLoss for_class(const ClassHandle& cls) { return TaskLoss(cls.task(), cls.loss()); }

  Task task() const { return task_; }
  const std::optional<LossSpec>& loss() const { return loss_; }

  Rational operator()(const Output& out, const Target& target) const;

 private:
  Task task_;
  std::optional<LossSpec> loss_;
};

Rational loss_eval(const TaskLoss& loss, const Output& out, const Target& target);

/// Target built from class member i (real-valued classes pair the
/// hypothesis with the class marginal).
Target target_of(const ClassHandle& cls, const BigInt& ordinal);

struct OptResult {
  Rational value;
  BigInt witness;
  /// classification only
  std::optional<BinaryHypothesis> bayes;
  std::optional<Rational> bayes_value;
};

/// inf over a finite class of the task loss against `target`. For
/// classification the class members stand for their induced classifiers.
OptResult opt_loss(const ClassHandle& cls, const Target& target, std::uint64_t budget = kDefaultBudget);

}  // namespace pacnfl
