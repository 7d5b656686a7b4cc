#include "pacnfl/dist.hpp"

#include <algorithm>

#include "pacnfl/error.hpp"

namespace pacnfl {

std::string to_string(const Atom& a) {
  if (!a.is_labeled()) return std::to_string(a.value);
  return "(" + std::to_string(a.value) + "," + std::to_string(a.bit()) + ")";
}

SparseDist::SparseDist(std::vector<Entry> entries, std::string tag) : tag_(std::move(tag)) {
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.first < y.first; });
  Rational total = 0;
  entries_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].first == entries[i - 1].first) {
      throw Error(Errc::InvalidDistribution, "repeated atom " + to_string(entries[i].first));
    }
    Rational& w = entries[i].second;
    w.canonicalize();
    if (sgn(w) < 0) throw Error(Errc::InvalidDistribution, "negative mass at " + to_string(entries[i].first));
    if (sgn(w) == 0) continue;
    total += w;
    entries_.push_back(std::move(entries[i]));
  }
  if (total != 1) throw Error(Errc::InvalidDistribution, "total mass " + to_string(total) + " != 1");
}

SparseDist SparseDist::point(Atom a, std::string tag) {
  return SparseDist({{a, Rational(1)}}, std::move(tag));
}

SparseDist SparseDist::with_tag(std::string tag) const {
  SparseDist copy = *this;
  copy.tag_ = std::move(tag);
  return copy;
}

Rational SparseDist::mass(const Atom& a) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), a,
                             [](const Entry& e, const Atom& key) { return e.first < key; });
  if (it == entries_.end() || it->first != a) return Rational(0);
  return it->second;
}

std::vector<Atom> SparseDist::support() const {
  std::vector<Atom> out;
  out.reserve(entries_.size());
  for (const auto& [a, w] : entries_) out.push_back(a);
  return out;
}

SparseDist uniform(std::span<const Atom> atoms, std::string tag) {
  std::vector<Atom> set(atoms.begin(), atoms.end());
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (set.empty()) throw Error(Errc::EmptySupport, "uniform over the empty set");
  const Rational w = ratio(1, set.size());
  std::vector<SparseDist::Entry> entries;
  entries.reserve(set.size());
  for (const Atom& a : set) entries.emplace_back(a, w);
  return SparseDist(std::move(entries), std::move(tag));
}

SparseDist mixture(std::span<const std::pair<Rational, SparseDist>> components, std::string tag) {
  if (components.empty()) throw Error(Errc::BadWeights, "empty mixture");
  Rational total = 0;
  for (const auto& [w, p] : components) {
    if (sgn(w) < 0) throw Error(Errc::BadWeights, "negative weight " + to_string(w));
    total += w;
  }
  if (total != 1) throw Error(Errc::BadWeights, "weights sum to " + to_string(total));

  std::vector<SparseDist::Entry> merged;
  for (const auto& [w, p] : components) {
    if (sgn(w) == 0) continue;
    for (const auto& [a, m] : p.entries()) merged.emplace_back(a, w * m);
  }
  std::sort(merged.begin(), merged.end(),
            [](const SparseDist::Entry& x, const SparseDist::Entry& y) { return x.first < y.first; });
  std::vector<SparseDist::Entry> combined;
  for (auto& e : merged) {
    if (!combined.empty() && combined.back().first == e.first) {
      combined.back().second += e.second;
    } else {
      combined.push_back(std::move(e));
    }
  }
  return SparseDist(std::move(combined), std::move(tag));
}

Rational tv(const SparseDist& p, const SparseDist& q) {
  const auto& a = p.entries();
  const auto& b = q.entries();
  Rational l1 = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      l1 += a[i++].second;
    } else if (i == a.size() || b[j].first < a[i].first) {
      l1 += b[j++].second;
    } else {
      l1 += abs(a[i].second - b[j].second);
      ++i;
      ++j;
    }
  }
  return Rational(l1 / 2);
}

Rational event_prob(const SparseDist& p, std::span<const Atom> event) {
  std::vector<Atom> set(event.begin(), event.end());
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  Rational total = 0;
  for (const Atom& a : set) total += p.mass(a);
  return total;
}

std::vector<Atom> plain_atoms(std::span<const std::uint64_t> values) {
  std::vector<Atom> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back(Atom::plain(v));
  return out;
}

}  // namespace pacnfl
