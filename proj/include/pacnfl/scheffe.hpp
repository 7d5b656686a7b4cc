#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pacnfl/dist.hpp"
#include "pacnfl/family.hpp"
#include "pacnfl/sample.hpp"

namespace pacnfl {

/// {x in supp(qi) U supp(qj) : qi(x) > qj(x)}, ascending.
std::vector<Atom> yatracos(const SparseDist& qi, const SparseDist& qj);

/// Minimum-distance selection over a fixed finite candidate list.
///
/// The Yatracos sets of all ordered candidate pairs are computed once and
/// deduplicated. Candidate masses on those sets are stored as integers over
/// a common denominator, so scoring a sample is integer arithmetic
/// (128-bit when the denominator allows, GMP otherwise). The object is
/// immutable after construction and safe to share between threads.
class ScheffeSelector {
 public:
  explicit ScheffeSelector(std::vector<SparseDist> candidates);

  /// Index of the first candidate minimizing max_A |q(A) - mu_S(A)|.
  std::size_t select(const Sample& s) const;
  const SparseDist& operator()(const Sample& s) const { return candidates_[select(s)]; }

  /// Exact score max_A |q_i(A) - mu_S(A)| (0 when there are no sets).
  Rational score(std::size_t i, const Sample& s) const;

  const std::vector<SparseDist>& candidates() const { return candidates_; }
  std::size_t set_count() const { return sets_.size(); }
  std::vector<std::vector<Atom>> sets() const;

 private:
  std::vector<std::uint64_t> counts(const Sample& s) const;

  std::vector<SparseDist> candidates_;
  // first index of each distinct candidate, and the distinct list
  std::vector<std::size_t> distinct_;
  std::vector<Atom> atoms_;
  std::vector<std::vector<std::uint32_t>> sets_;
  BigInt denom_;
  bool fast_ = false;
  // mass_[d * sets + a]: L * q_{distinct_[d]}(A_a)
  std::vector<__int128> mass_fast_;
  std::vector<BigInt> mass_big_;
};

/// Scheffe estimate over a finite class. Throws EmptyClass / EmptySample.
SparseDist scheffe(const ClassHandle& cls, const Sample& s, std::uint64_t budget = kDefaultBudget);
std::size_t scheffe_index(std::span<const SparseDist> candidates, const Sample& s);

}  // namespace pacnfl
