#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pacnfl/family.hpp"
#include "pacnfl/sample.hpp"
#include "pacnfl/task_loss.hpp"

namespace pacnfl {

using AnySample = std::variant<Sample, RealSample>;

std::size_t sample_size(const AnySample& s);

/// Deterministic map from samples to outputs, tagged with its task and the
/// agnostic factor it claims (3 for TV, 1 otherwise).
class Learner {
 public:
  using Fn = std::function<Output(const AnySample&)>;

  Learner(std::string name, Task task, int alpha, Fn fn, std::optional<LossSpec> loss = {});

  const std::string& name() const { return name_; }
  Task task() const { return task_; }
  int alpha() const { return alpha_; }
  const std::optional<LossSpec>& loss() const { return loss_; }

  Output operator()(const AnySample& s) const { return fn_(s); }

 private:
  std::string name_;
  Task task_;
  int alpha_;
  Fn fn_;
  std::optional<LossSpec> loss_;
};

Learner scheffe_learner(const ClassHandle& cls, std::uint64_t budget = kDefaultBudget);
/// Finite-class learner of the task applied to cls.truncate(eps).
Learner truncation_learner(const ClassHandle& staged, const Rational& eps, std::uint64_t budget = kDefaultBudget);
/// ERM over H(Q) (classification) or over the class itself (real-valued).
Learner erm_learner(const ClassHandle& cls, std::uint64_t budget = kDefaultBudget);
/// Empirical distribution, or the per-point plurality label (ties to the
/// smaller label; unseen points map to 0).
Learner empirical_baseline(Task task, std::optional<LossSpec> loss = {});
Learner constant_learner(Output out, Task task, std::optional<LossSpec> loss = {});
Learner union_learner(std::vector<Learner> learners);

SparseDist truncation_learn(const ClassHandle& staged, const Rational& eps, const Sample& s,
                            std::uint64_t budget = kDefaultBudget);

/// Runs every learner on the first ceil(m/2) points and selects among the
/// candidates on the rest (Scheffe for distributions, ERM otherwise).
Output union_aggregate(std::span<const Learner> learners, const AnySample& s);

// Sample sizes advertised by the upper-bound arguments (natural logs).

/// ceil((ln(3M^2) + ln(1/delta)) / (2 (eps/4)^2))
std::uint64_t scheffe_m_for(const BigInt& class_size, const Rational& eps, const Rational& delta);
/// ceil(128 (ln(3 (I n_max(I))^2) + ln(1/delta)) / eps^2), I = eta_inverse(eps/4)
std::uint64_t truncation_m_for(const SequenceSpec& spec, const Rational& eps, const Rational& delta);
/// ceil(2 ln(2|H|/delta) / eps^2): Hoeffding plus a union bound at eps/2
std::uint64_t finite_erm_m_for(const BigInt& class_size, const Rational& eps, const Rational& delta);
/// ceil(4 (ln k + ln(2/delta)) / eps^2)
std::uint64_t union_m_for(std::uint64_t k, const Rational& eps, const Rational& delta);

}  // namespace pacnfl
