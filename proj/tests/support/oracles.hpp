#pragma once

// Reference computations written independently of the library internals:
// plain maps, brute-force enumeration and closed forms.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "pacnfl/dist.hpp"
#include "pacnfl/loss.hpp"

namespace oracle {

using pacnfl::Atom;
using pacnfl::Rational;
using pacnfl::SparseDist;

inline std::map<Atom, Rational> as_map(const SparseDist& p) {
  std::map<Atom, Rational> m;
  for (const auto& [a, w] : p.entries()) m[a] += w;
  return m;
}

inline Rational mass(const std::map<Atom, Rational>& m, const Atom& a) {
  auto it = m.find(a);
  return it == m.end() ? Rational(0) : it->second;
}

inline Rational half_l1(const SparseDist& p, const SparseDist& q) {
  const auto mp = as_map(p), mq = as_map(q);
  std::set<Atom> all;
  for (const auto& [a, w] : mp) all.insert(a);
  for (const auto& [a, w] : mq) all.insert(a);
  Rational s = 0;
  for (const auto& a : all) s += abs(Rational(mass(mp, a) - mass(mq, a)));
  return s / 2;
}

/// max over all events A within the union support of |p(A) - q(A)|.
inline Rational brute_tv(const SparseDist& p, const SparseDist& q) {
  const auto mp = as_map(p), mq = as_map(q);
  std::set<Atom> all;
  for (const auto& [a, w] : mp) all.insert(a);
  for (const auto& [a, w] : mq) all.insert(a);
  const std::vector<Atom> u(all.begin(), all.end());
  Rational best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u.size()); ++mask) {
    Rational pa = 0, qa = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (mask >> i & 1) {
        pa += mass(mp, u[i]);
        qa += mass(mq, u[i]);
      }
    }
    const Rational d = abs(Rational(pa - qa));
    if (d > best) best = d;
  }
  return best;
}

/// All length-m sequences over the alphabet, lexicographic.
template <class T>
std::vector<std::vector<T>> sequences(const std::vector<T>& alphabet, std::uint64_t m) {
  std::vector<std::vector<T>> out{{}};
  for (std::uint64_t step = 0; step < m; ++step) {
    std::vector<std::vector<T>> next;
    for (const auto& s : out) {
      for (const auto& a : alphabet) {
        auto t = s;
        t.push_back(a);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline Rational seq_prob(const std::map<Atom, Rational>& p, const std::vector<Atom>& s) {
  Rational r = 1;
  for (const auto& a : s) r *= mass(p, a);
  return r;
}

inline std::uint64_t popcount(std::uint64_t x) { return static_cast<std::uint64_t>(__builtin_popcountll(x)); }

/// Symmetrized quantity for the filtered family {(1-eta) d_0 + eta U_A :
/// A in {1..base}, |A| = r}: the flip of A at sample S moves every point of
/// A outside the observed set, so the pair distance is eta |A \ C| / r when
/// C lies in A (otherwise the sample has probability 0 under q_A).
inline Rational symmetrized_distribution(const Rational& eta, std::uint64_t base, std::uint64_t r, std::uint64_t m) {
  std::vector<Atom> alphabet;
  for (std::uint64_t x = 0; x <= base; ++x) alphabet.push_back(Atom::plain(x));
  const auto seqs = sequences(alphabet, m);
  Rational total = 0;
  std::uint64_t members = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << base); ++mask) {
    if (popcount(mask) != r) continue;
    ++members;
    std::map<Atom, Rational> q;
    if (eta != 1) q[Atom::plain(0)] = 1 - eta;
    for (std::uint64_t x = 1; x <= base; ++x) {
      if (mask >> (x - 1) & 1) q[Atom::plain(x)] = eta / r;
    }
    for (const auto& s : seqs) {
      const Rational pr = seq_prob(q, s);
      if (pr == 0) continue;
      std::set<std::uint64_t> c;
      for (const auto& a : s) {
        if (a.value != 0) c.insert(a.value);
      }
      total += pr * eta * pacnfl::ratio(static_cast<std::int64_t>(r - c.size()), r);
    }
  }
  return total / (2 * members);
}

/// Same quantity for {(1-eta) d_(0,0) + eta U over {1..points} labeled by
/// B}: the flip relabels every unseen point, and any classifier pays
/// eta / points per unseen point on one of the two members.
inline Rational symmetrized_classification(const Rational& eta, std::uint64_t points, std::uint64_t m) {
  // The pair distance depends only on which x were seen, and every member
  // has the same marginal, so enumerate x-sequences once.
  std::vector<std::uint64_t> xs;
  for (std::uint64_t x = 0; x <= points; ++x) xs.push_back(x);
  Rational total = 0;
  for (const auto& s : sequences(xs, m)) {
    Rational pr = 1;
    std::set<std::uint64_t> seen;
    for (auto x : s) {
      pr *= x == 0 ? Rational(1 - eta) : Rational(eta / points);
      if (x != 0) seen.insert(x);
    }
    total += pr * eta * pacnfl::ratio(static_cast<std::int64_t>(points - seen.size()), points);
  }
  return total / 2;
}

/// Real-valued analog over marginal U_{1..points}: each unseen point costs
/// pair_floor(g^{-1}(eta)) / points.
inline Rational symmetrized_real(const pacnfl::LossSpec& loss, const Rational& eta, std::uint64_t points,
                                 std::uint64_t m) {
  std::vector<std::uint64_t> xs;
  for (std::uint64_t x = 1; x <= points; ++x) xs.push_back(x);
  const Rational floor = loss.pair_floor(loss.g_inverse(eta));
  Rational total = 0;
  for (const auto& s : sequences(xs, m)) {
    std::set<std::uint64_t> seen(s.begin(), s.end());
    total += floor * pacnfl::ratio(static_cast<std::int64_t>(points - seen.size()), points);
  }
  Rational count = 1;
  for (std::uint64_t i = 0; i < m; ++i) count *= points;
  return total / count / 2;
}

}  // namespace oracle
