#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pacnfl/rational.hpp"

namespace pacnfl {

enum class Label : std::int8_t { None = -1, Zero = 0, One = 1 };

/// A point of the domain: a natural number, or a (natural, bit) pair for the
/// classification task. Ordering is ascending by value, then by label, which
/// is also the canonical order used for inverse-CDF sampling.
struct Atom {
  std::uint64_t value = 0;
  Label label = Label::None;

  static constexpr Atom plain(std::uint64_t v) { return Atom{v, Label::None}; }
  static constexpr Atom labeled(std::uint64_t v, int bit) {
    return Atom{v, bit ? Label::One : Label::Zero};
  }

  constexpr bool is_labeled() const { return label != Label::None; }
  constexpr int bit() const { return label == Label::One ? 1 : 0; }

  friend constexpr auto operator<=>(const Atom&, const Atom&) = default;
};

std::string to_string(const Atom& a);

/// Finitely supported distribution with exact rational masses.
/// Invariants: atoms strictly increasing, masses in (0, 1], total mass 1.
/// Equality is structural on the stored (atom, mass) entries; the tag is
/// informational only.
class SparseDist {
 public:
  using Entry = std::pair<Atom, Rational>;

  /// Zero-mass entries are dropped. Throws InvalidDistribution on negative
  /// masses, repeated atoms, or a total different from 1.
  explicit SparseDist(std::vector<Entry> entries, std::string tag = {});

  static SparseDist point(Atom a, std::string tag = {});

  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& tag() const { return tag_; }
  SparseDist with_tag(std::string tag) const;

  Rational mass(const Atom& a) const;
  std::vector<Atom> support() const;
  std::size_t support_size() const { return entries_.size(); }

  friend bool operator==(const SparseDist& a, const SparseDist& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
  std::string tag_;
};

/// Uniform distribution over a finite set (duplicates are ignored).
SparseDist uniform(std::span<const Atom> atoms, std::string tag = {});

/// Convex combination. Weights must be non-negative and sum to exactly 1.
SparseDist mixture(std::span<const std::pair<Rational, SparseDist>> components, std::string tag = {});

/// Total variation distance, computed as half the L1 distance.
Rational tv(const SparseDist& p, const SparseDist& q);

/// p(A) for a finite event A; repeated atoms in A count once.
Rational event_prob(const SparseDist& p, std::span<const Atom> event);

std::vector<Atom> plain_atoms(std::span<const std::uint64_t> values);

}  // namespace pacnfl

template <>
struct std::hash<pacnfl::Atom> {
  std::size_t operator()(const pacnfl::Atom& a) const noexcept {
    return std::hash<std::uint64_t>{}(a.value * 4 + static_cast<std::uint64_t>(static_cast<int>(a.label) + 1));
  }
};
