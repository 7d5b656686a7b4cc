#pragma once

// Seeded generators for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "pacnfl/dist.hpp"

namespace testgen {

using pacnfl::Atom;
using pacnfl::Rational;
using pacnfl::SparseDist;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_); }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return below(2) == 1; }

  /// k distinct values from [0, range), ascending.
  std::vector<std::uint64_t> distinct(std::uint64_t k, std::uint64_t range) {
    std::set<std::uint64_t> s;
    while (s.size() < k) s.insert(below(range));
    return {s.begin(), s.end()};
  }

  /// Random distribution on 1..max_atoms atoms drawn from [0, range) with
  /// integer weights in 1..max_weight.
  SparseDist dist(std::uint64_t max_atoms, std::uint64_t range, bool labeled = false, std::uint64_t max_weight = 9) {
    const std::uint64_t k = between(1, max_atoms);
    std::vector<Atom> atoms;
    if (labeled) {
      for (auto v : distinct(k, 2 * range)) atoms.push_back(Atom::labeled(v / 2, static_cast<int>(v % 2)));
    } else {
      for (auto v : distinct(k, range)) atoms.push_back(Atom::plain(v));
    }
    std::vector<std::uint64_t> w(k);
    std::uint64_t total = 0;
    for (auto& x : w) total += (x = between(1, max_weight));
    std::vector<SparseDist::Entry> entries;
    for (std::uint64_t i = 0; i < k; ++i) entries.emplace_back(atoms[i], Rational(w[i], total));
    return SparseDist(std::move(entries));
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace testgen
