#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pacnfl/dist.hpp"

namespace pacnfl {

/// Reproducible random stream identified by (master seed, stream index).
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard, seeded with a splitmix64 mix of the pair.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index) : seed_(seed), index_(index) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

  std::mt19937_64 engine() const;

  /// Stream with the same index under a seed derived from (seed, index, tag).
  /// Used to give each target of an experiment its own family of streams.
  RngStream derive(std::uint64_t tag) const;

  /// Same seed, different index.
  RngStream at(std::uint64_t index) const { return RngStream(seed_, index); }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct Provenance {
  std::string source;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct Sample {
  std::vector<Atom> atoms;
  std::optional<Provenance> provenance;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
};

/// Inverse-CDF sampler over the canonical atom order. Thresholds are
/// floor(CDF * 2^64) computed exactly, so a draw consumes exactly one 64-bit
/// engine output and the mapping is bit-reproducible.
class Sampler {
 public:
  explicit Sampler(const SparseDist& p);

  template <class Engine>
  const Atom& operator()(Engine& eng) const {
    return atoms_[locate(static_cast<std::uint64_t>(eng()))];
  }

  std::size_t locate(std::uint64_t u) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<unsigned __int128> thresholds_;
};

Sample draw(const SparseDist& p, std::size_t m, const RngStream& rng);

/// Fraction of sample entries that lie in A. Throws EmptySample.
Rational empirical_measure(const Sample& s, std::span<const Atom> event);

}  // namespace pacnfl
