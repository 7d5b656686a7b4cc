#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pacnfl/dist.hpp"
#include "pacnfl/rational.hpp"
#include "pacnfl/sample.hpp"

namespace pacnfl {

/// {0,1}-valued function on the naturals with a finite one-set.
class BinaryHypothesis {
 public:
  BinaryHypothesis() = default;
  explicit BinaryHypothesis(std::vector<std::uint64_t> ones);

  int operator()(std::uint64_t x) const;
  const std::vector<std::uint64_t>& ones() const { return ones_; }

  friend bool operator==(const BinaryHypothesis&, const BinaryHypothesis&) = default;

 private:
  std::vector<std::uint64_t> ones_;
};

/// Function on the naturals with finitely many non-zero values in [0,1].
class RealHypothesis {
 public:
  using Entry = std::pair<std::uint64_t, Rational>;

  RealHypothesis() = default;
  explicit RealHypothesis(std::vector<Entry> values);

  Rational operator()(std::uint64_t x) const;
  const std::vector<Entry>& values() const { return values_; }

  friend bool operator==(const RealHypothesis& a, const RealHypothesis& b) { return a.values_ == b.values_; }

 private:
  std::vector<Entry> values_;
};

std::string to_string(const BinaryHypothesis& h);
std::string to_string(const RealHypothesis& h);

struct LabeledPoint {
  std::uint64_t x = 0;
  Rational y;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

struct RealSample {
  std::vector<LabeledPoint> points;
  std::optional<Provenance> provenance;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Data distribution for the real-valued task: x ~ marginal, y = labeler(x).
struct RealTarget {
  SparseDist marginal;
  RealHypothesis labeler;
};

RealSample draw(const RealTarget& target, std::size_t m, const RngStream& rng);

}  // namespace pacnfl
