#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pacnfl/dist.hpp"
#include "pacnfl/hypothesis.hpp"
#include "pacnfl/loss.hpp"
#include "pacnfl/rational.hpp"
#include "pacnfl/sequence.hpp"

namespace pacnfl {

enum class Task { Distribution, Classification, RealValued };

std::string_view task_name(Task t);
/// Accepts "distribution", "classification", "real-valued".
Task parse_task(std::string_view text);

/// Distribution classes hold SparseDist members (labeled atoms for the
/// classification task); real-valued classes hold RealHypothesis members.
using Member = std::variant<SparseDist, RealHypothesis>;

/// Position inside a staged union: stage >= 1 and an ordinal inside that
/// stage. Stage 0 denotes a flat ordinal of a finite class (for truncated
/// classes, the anchor member).
struct MemberIndex {
  std::uint64_t stage = 0;
  BigInt ordinal;
};

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;

/// Parameters of a subset-indexed family over the points {1..points}.
///   Distribution:   (1-eta) delta_0 + eta U_A, A non-empty (or |A| = filter)
///   Classification: (1-eta) delta_(0,0) + eta U over {1..points} with
///                   label 1 exactly on B
///   RealValued:     x -> g^{-1}(eta) on A, 0 elsewhere
struct SubsetShape {
  Task task = Task::Distribution;
  Rational eta;
  std::uint64_t points = 0;
  std::optional<std::uint64_t> filter;
  std::optional<LossSpec> loss;
};

class ClassHandle {
 public:
  struct Rep;

  explicit ClassHandle(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  Task task() const;
  bool is_finite() const;
  bool is_staged() const;
  bool is_truncated() const;

  /// Number of members. Throws BadRange for a staged union.
  BigInt size() const;
  /// Decimal size, or "countably infinite".
  std::string size_text() const;

  Member materialize(const BigInt& ordinal) const;
  Member materialize(const MemberIndex& index) const;
  SparseDist dist(const BigInt& ordinal) const;
  RealHypothesis hypothesis(const BigInt& ordinal) const;

  /// All members in index order. Throws ClassTooLarge above the budget.
  std::vector<Member> enumerate(std::uint64_t budget = kDefaultBudget) const;
  std::vector<SparseDist> distributions(std::uint64_t budget = kDefaultBudget) const;
  std::vector<RealHypothesis> hypotheses(std::uint64_t budget = kDefaultBudget) const;

  /// Marginal over the domain used to build targets of a real-valued class.
  std::optional<SparseDist> marginal() const;
  RealTarget real_target(const BigInt& ordinal) const;

  /// Present for the parametric families (and single stages of a union).
  const SubsetShape* shape() const;
  /// The subset A (or B for classification) a parametric member is built on.
  std::vector<std::uint64_t> subset(const BigInt& ordinal) const;
  /// Inverse of subset(). Throws BadPrecondition for sets outside the family.
  BigInt rank(std::span<const std::uint64_t> subset) const;

  /// Staged unions and their truncations.
  const SequenceSpec& sequence() const;
  std::optional<LossSpec> loss() const;
  ClassHandle stage(std::uint64_t i) const;
  /// Finite sub-class {anchor} U stages 1..eta_inverse(eps/4).
  ClassHandle truncate(const Rational& eps, std::uint64_t budget = kDefaultBudget) const;
  std::uint64_t last_stage() const;
  MemberIndex origin(const BigInt& flat) const;

  std::string describe() const;

 private:
  std::shared_ptr<const Rep> rep_;
};

/// P_{eta,n}: members indexed by non-empty A within {1..n} in ascending
/// bitmask order, or by the r-subsets (colex order) when filter = r.
ClassHandle p_eta_n(const Rational& eta, std::uint64_t n, std::optional<std::uint64_t> filter = {});

/// P^{0/1}_{eta,n}: members indexed by the label-1 set B within {1..2n}.
ClassHandle classification_stage(const Rational& eta, std::uint64_t n);

/// F_{eta,n}: members indexed by A within {1..n}; A empty gives h_0.
/// Targets use the marginal U_{1..n}.
ClassHandle f_class(const LossSpec& loss, const Rational& eta, std::uint64_t n);

/// Countable union of the task's stage families. Stage weights are clamped
/// into [0, 1] (distribution, classification) or [0, g_max] (real-valued).
ClassHandle stage_union(Task task, SequenceSpec spec, std::optional<LossSpec> loss = {});

ClassHandle explicit_class(Task task, std::vector<Member> members, std::optional<SparseDist> marginal = {},
                           std::string name = {});

/// Colex unranking of r-subsets of {1..n}; ordinal in [0, C(n, r)).
std::vector<std::uint64_t> unrank_subset(const BigInt& ordinal, std::uint64_t n, std::uint64_t r);
BigInt rank_subset(std::span<const std::uint64_t> subset);

}  // namespace pacnfl
