#include "pacnfl/sample.hpp"

#include <algorithm>

#include "pacnfl/error.hpp"

namespace pacnfl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 RngStream::engine() const {
  return std::mt19937_64(splitmix64(seed_ ^ splitmix64(index_)));
}

RngStream RngStream::derive(std::uint64_t tag) const {
  const std::uint64_t mixed = splitmix64(splitmix64(seed_ + 0x632be59bd9b4e019ULL) ^ splitmix64(tag ^ (index_ << 1)));
  return RngStream(mixed, index_);
}

Sampler::Sampler(const SparseDist& p) {
  const unsigned __int128 full = static_cast<unsigned __int128>(1) << 64;
  Rational cdf = 0;
  const auto& entries = p.entries();
  atoms_.reserve(entries.size());
  thresholds_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    atoms_.push_back(entries[i].first);
    cdf += entries[i].second;
    if (i + 1 == entries.size()) {
      thresholds_.push_back(full);
      break;
    }
    BigInt scaled = cdf.get_num();
    scaled <<= 64;
    scaled /= cdf.get_den();
    const auto hi = to_u64(BigInt(scaled >> 64));
    const auto lo = to_u64(BigInt(scaled - (BigInt(scaled >> 64) << 64)));
    thresholds_.push_back((static_cast<unsigned __int128>(hi) << 64) | lo);
  }
}

std::size_t Sampler::locate(std::uint64_t u) const {
  const unsigned __int128 key = u;
  auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), key);
  // the final threshold is 2^64 > any u
  return static_cast<std::size_t>(it - thresholds_.begin());
}

Sample draw(const SparseDist& p, std::size_t m, const RngStream& rng) {
  Sampler sampler(p);
  auto eng = rng.engine();
  Sample s;
  s.atoms.reserve(m);
  for (std::size_t i = 0; i < m; ++i) s.atoms.push_back(sampler(eng));
  s.provenance = Provenance{p.tag(), rng.seed(), rng.index()};
  return s;
}

Rational empirical_measure(const Sample& s, std::span<const Atom> event) {
  if (s.empty()) throw Error(Errc::EmptySample, "empirical measure of an empty sample");
  std::vector<Atom> set(event.begin(), event.end());
  std::sort(set.begin(), set.end());
  std::uint64_t hits = 0;
  for (const Atom& a : s.atoms) {
    if (std::binary_search(set.begin(), set.end(), a)) ++hits;
  }
  return ratio(static_cast<std::int64_t>(hits), s.size());
}

}  // namespace pacnfl
