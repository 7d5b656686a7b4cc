#include "pacnfl/scheffe.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "pacnfl/error.hpp"

namespace pacnfl {

std::vector<Atom> yatracos(const SparseDist& qi, const SparseDist& qj) {
  std::vector<Atom> out;
  const auto& a = qi.entries();
  const auto& b = qj.entries();
  std::size_t x = 0, y = 0;
  while (x < a.size()) {
    if (y < b.size() && b[y].first < a[x].first) {
      ++y;
    } else if (y < b.size() && b[y].first == a[x].first) {
      if (a[x].second > b[y].second) out.push_back(a[x].first);
      ++x;
      ++y;
    } else {
      out.push_back(a[x].first);  // qj is 0 here
      ++x;
    }
  }
  return out;
}

namespace {

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 25;
constexpr std::size_t kKillers = 8;

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

__int128 to_i128(const BigInt& z) {
  // caller guarantees |z| < 2^63
  return static_cast<__int128>(z.get_si());
}

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

}  // namespace

ScheffeSelector::ScheffeSelector(std::vector<SparseDist> candidates) : candidates_(std::move(candidates)) {
  if (candidates_.empty()) throw Error(Errc::EmptyClass, "Scheffe selection over an empty class");

  std::map<std::vector<SparseDist::Entry>, std::size_t> seen;
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (seen.emplace(candidates_[i].entries(), i).second) distinct_.push_back(i);
  }
  for (auto i : distinct_) {
    for (const auto& [a, w] : candidates_[i].entries()) atoms_.push_back(a);
  }
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());

  denom_ = 1;
  for (auto i : distinct_) {
    for (const auto& [a, w] : candidates_[i].entries()) denom_ = lcm(denom_, w.get_den());
  }

  // dense numerators over the common denominator
  const std::size_t k = atoms_.size();
  std::vector<std::vector<BigInt>> dense(distinct_.size(), std::vector<BigInt>(k, BigInt(0)));
  for (std::size_t d = 0; d < distinct_.size(); ++d) {
    for (const auto& [a, w] : candidates_[distinct_[d]].entries()) {
      const auto pos = static_cast<std::size_t>(std::lower_bound(atoms_.begin(), atoms_.end(), a) - atoms_.begin());
      dense[d][pos] = w.get_num() * (denom_ / w.get_den());
    }
  }

  for (std::size_t d1 = 0; d1 < dense.size(); ++d1) {
    for (std::size_t d2 = 0; d2 < dense.size(); ++d2) {
      if (d1 == d2) continue;
      std::vector<std::uint32_t> set;
      for (std::size_t x = 0; x < k; ++x) {
        if (dense[d1][x] > dense[d2][x]) set.push_back(static_cast<std::uint32_t>(x));
      }
      if (!set.empty()) sets_.push_back(std::move(set));
    }
  }
  std::sort(sets_.begin(), sets_.end());
  sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());

  if (distinct_.size() * sets_.size() > kMaxTableEntries) {
    throw Error(Errc::ClassTooLarge, std::to_string(distinct_.size()) + " distinct candidates x " +
                                         std::to_string(sets_.size()) + " Yatracos sets exceeds the selector table");
  }
  fast_ = denom_ <= (BigInt(1) << 62);
  const std::size_t y = sets_.size();
  if (fast_) {
    mass_fast_.assign(distinct_.size() * y, 0);
  } else {
    mass_big_.assign(distinct_.size() * y, BigInt(0));
  }
  for (std::size_t d = 0; d < dense.size(); ++d) {
    for (std::size_t a = 0; a < y; ++a) {
      BigInt sum = 0;
      for (auto x : sets_[a]) sum += dense[d][x];
      if (fast_) {
        mass_fast_[d * y + a] = to_i128(sum);
      } else {
        mass_big_[d * y + a] = sum;
      }
    }
  }
}

std::vector<std::uint64_t> ScheffeSelector::counts(const Sample& s) const {
  std::vector<std::uint64_t> hist(atoms_.size(), 0);
  for (const Atom& a : s.atoms) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it != atoms_.end() && *it == a) ++hist[static_cast<std::size_t>(it - atoms_.begin())];
  }
  std::vector<std::uint64_t> out(sets_.size(), 0);
  for (std::size_t a = 0; a < sets_.size(); ++a) {
    for (auto x : sets_[a]) out[a] += hist[x];
  }
  return out;
}

std::size_t ScheffeSelector::select(const Sample& s) const {
  if (s.empty()) throw Error(Errc::EmptySample, "Scheffe selection needs a non-empty sample");
  if (distinct_.size() == 1 || sets_.empty()) return distinct_.front();
  const std::vector<std::uint64_t> c = counts(s);
  const std::size_t y = sets_.size();
  const std::uint64_t m = s.size();

  // Sets that eliminated recent candidates are tried first; this only
  // changes how fast a losing candidate is abandoned, not the result.
  std::array<std::size_t, kKillers> killers{};
  std::size_t killer_count = 0, killer_next = 0;
  auto remember = [&](std::size_t a) {
    for (std::size_t t = 0; t < killer_count; ++t) {
      if (killers[t] == a) return;
    }
    killers[killer_next] = a;
    killer_next = (killer_next + 1) % kKillers;
    killer_count = std::min(killer_count + 1, kKillers);
  };

  if (fast_ && m <= (std::uint64_t{1} << 31)) {
    const __int128 big_l = to_i128(denom_);
    std::vector<__int128> target(y);
    for (std::size_t a = 0; a < y; ++a) target[a] = static_cast<__int128>(c[a]) * big_l;
    std::size_t best = 0;
    __int128 best_score = -1;
    for (std::size_t d = 0; d < distinct_.size(); ++d) {
      const __int128* row = &mass_fast_[d * y];
      auto dev = [&](std::size_t a) { return abs128(row[a] * static_cast<__int128>(m) - target[a]); };
      bool lost = false;
      __int128 running = 0;
      if (best_score >= 0) {
        for (std::size_t t = 0; t < killer_count && !lost; ++t) {
          running = std::max(running, dev(killers[t]));
          lost = running >= best_score;
        }
        for (std::size_t a = 0; a < y && !lost; ++a) {
          running = std::max(running, dev(a));
          if (running >= best_score) {
            lost = true;
            remember(a);
          }
        }
      } else {
        for (std::size_t a = 0; a < y; ++a) running = std::max(running, dev(a));
      }
      if (!lost) {
        best = d;
        best_score = running;
      }
    }
    return distinct_[best];
  }

  const BigInt mm = from_u64_big(m);
  std::vector<BigInt> target(y);
  for (std::size_t a = 0; a < y; ++a) target[a] = from_u64_big(c[a]) * denom_;
  std::size_t best = 0;
  BigInt best_score = -1;
  BigInt dev;
  for (std::size_t d = 0; d < distinct_.size(); ++d) {
    BigInt running = 0;
    bool lost = false;
    for (std::size_t a = 0; a < y && !lost; ++a) {
      dev = mass_big_[d * y + a] * mm - target[a];
      if (sgn(dev) < 0) dev = -dev;
      if (dev > running) running = dev;
      lost = best_score >= 0 && running >= best_score;
    }
    if (!lost) {
      best = d;
      best_score = running;
    }
  }
  return distinct_[best];
}

Rational ScheffeSelector::score(std::size_t i, const Sample& s) const {
  if (s.empty()) throw Error(Errc::EmptySample, "Scheffe score needs a non-empty sample");
  if (i >= candidates_.size()) throw Error(Errc::BadRange, "candidate index out of range");
  Rational best = 0;
  for (const auto& set : sets()) {
    Rational dev = event_prob(candidates_[i], set) - empirical_measure(s, set);
    if (sgn(dev) < 0) dev = -dev;
    if (dev > best) best = dev;
  }
  return best;
}

std::vector<std::vector<Atom>> ScheffeSelector::sets() const {
  std::vector<std::vector<Atom>> out;
  out.reserve(sets_.size());
  for (const auto& set : sets_) {
    std::vector<Atom> a;
    a.reserve(set.size());
    for (auto x : set) a.push_back(atoms_[x]);
    out.push_back(std::move(a));
  }
  return out;
}

SparseDist scheffe(const ClassHandle& cls, const Sample& s, std::uint64_t budget) {
  if (s.empty()) throw Error(Errc::EmptySample, "Scheffe selection needs a non-empty sample");
  ScheffeSelector sel(cls.distributions(budget));
  return sel(s);
}

std::size_t scheffe_index(std::span<const SparseDist> candidates, const Sample& s) {
  ScheffeSelector sel(std::vector<SparseDist>(candidates.begin(), candidates.end()));
  return sel.select(s);
}

}  // namespace pacnfl
