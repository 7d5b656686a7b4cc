#include "pacnfl/hypothesis.hpp"

#include <algorithm>

#include "pacnfl/error.hpp"

namespace pacnfl {

BinaryHypothesis::BinaryHypothesis(std::vector<std::uint64_t> ones) : ones_(std::move(ones)) {
  std::sort(ones_.begin(), ones_.end());
  ones_.erase(std::unique(ones_.begin(), ones_.end()), ones_.end());
}

int BinaryHypothesis::operator()(std::uint64_t x) const {
  return std::binary_search(ones_.begin(), ones_.end(), x) ? 1 : 0;
}

RealHypothesis::RealHypothesis(std::vector<Entry> values) {
  std::sort(values.begin(), values.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && values[i].first == values[i - 1].first) {
      throw Error(Errc::BadPrecondition, "repeated point " + std::to_string(values[i].first));
    }
    if (!in_unit_interval(values[i].second)) {
      throw Error(Errc::BadRange, "hypothesis value " + to_string(values[i].second) + " outside [0,1]");
    }
    if (sgn(values[i].second) != 0) values_.push_back(std::move(values[i]));
  }
}

Rational RealHypothesis::operator()(std::uint64_t x) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x,
                             [](const Entry& e, std::uint64_t key) { return e.first < key; });
  if (it == values_.end() || it->first != x) return Rational(0);
  return it->second;
}

std::string to_string(const BinaryHypothesis& h) {
  std::string out = "1 on {";
  for (std::size_t i = 0; i < h.ones().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(h.ones()[i]);
  }
  return out + "}";
}

std::string to_string(const RealHypothesis& h) {
  std::string out = "{";
  for (std::size_t i = 0; i < h.values().size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(h.values()[i].first) + "->" + to_string(h.values()[i].second);
  }
  return out + "}";
}

RealSample draw(const RealTarget& target, std::size_t m, const RngStream& rng) {
  Sampler sampler(target.marginal);
  auto eng = rng.engine();
  RealSample s;
  s.points.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Atom& a = sampler(eng);
    s.points.push_back(LabeledPoint{a.value, target.labeler(a.value)});
  }
  s.provenance = Provenance{target.marginal.tag(), rng.seed(), rng.index()};
  return s;
}

}  // namespace pacnfl
