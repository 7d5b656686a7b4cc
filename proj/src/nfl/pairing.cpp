#include "pacnfl/pairing.hpp"

#include <algorithm>

#include "pacnfl/error.hpp"

namespace pacnfl {

PairingContext PairingContext::from_sample(std::span<const Atom> sample, std::uint64_t base) {
  PairingContext ctx;
  ctx.base = base;
  for (const Atom& a : sample) {
    if (a.value >= 1 && a.value <= base) ctx.c.push_back(a.value);
  }
  std::sort(ctx.c.begin(), ctx.c.end());
  ctx.c.erase(std::unique(ctx.c.begin(), ctx.c.end()), ctx.c.end());
  return ctx;
}

namespace {

std::string set_text(std::span<const std::uint64_t> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

void check(const PairingContext& ctx, std::span<const std::uint64_t> a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0 || a[i] > ctx.base || (i > 0 && a[i] <= a[i - 1])) {
      throw Error(Errc::BadPrecondition, set_text(a) + " is not an ascending subset of {1.." + std::to_string(ctx.base) +
                                             "}");
    }
  }
  if (!std::includes(a.begin(), a.end(), ctx.c.begin(), ctx.c.end())) {
    throw Error(Errc::BadPrecondition, "C_j = " + set_text(ctx.c) + " is not contained in " + set_text(a));
  }
  if (2 * a.size() > ctx.base) {
    throw Error(Errc::BadPrecondition, "|A| = " + std::to_string(a.size()) + " exceeds base/2");
  }
}

// Cyclic bracket matching over the free points, walking forward or
// backward; returns C_j plus the partners of the opening points.
std::vector<std::uint64_t> match(const PairingContext& ctx, std::span<const std::uint64_t> a, bool forward) {
  std::vector<std::uint64_t> free;
  free.reserve(ctx.base - ctx.c.size());
  for (std::uint64_t x = 1, j = 0; x <= ctx.base; ++x) {
    if (j < ctx.c.size() && ctx.c[j] == x) {
      ++j;
    } else {
      free.push_back(x);
    }
  }
  const std::size_t f = free.size();
  std::vector<char> open(f, 0), taken(f, 0);
  for (std::size_t p = 0; p < f; ++p) open[p] = std::binary_search(a.begin(), a.end(), free[p]);

  std::vector<std::size_t> stack;
  std::vector<std::uint64_t> out(ctx.c.begin(), ctx.c.end());
  for (std::size_t t = 0; t < 2 * f; ++t) {
    const std::size_t p = forward ? t % f : f - 1 - t % f;
    if (open[p]) {
      if (t < f) stack.push_back(p);
    } else if (!taken[p] && !stack.empty()) {
      taken[p] = 1;
      stack.pop_back();
      out.push_back(free[p]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::uint64_t> pairing_gj(const PairingContext& ctx, std::span<const std::uint64_t> a) {
  check(ctx, a);
  return match(ctx, a, true);
}

std::vector<std::uint64_t> pairing_gj_inverse(const PairingContext& ctx, std::span<const std::uint64_t> b) {
  check(ctx, b);
  return match(ctx, b, false);
}

SparseDist flip_fj(const PairingContext& ctx, const SparseDist& q) {
  const Rational eta = 1 - q.mass(Atom::plain(0));
  std::vector<std::uint64_t> a;
  for (const auto& [atom, w] : q.entries()) {
    if (atom.is_labeled()) throw Error(Errc::BadPrecondition, "flip_fj expects plain atoms");
    if (atom.value != 0) a.push_back(atom.value);
  }
  if (a.empty()) throw Error(Errc::BadPrecondition, "flip_fj expects a member with non-empty A");
  const Rational w = eta / from_u64(a.size());
  for (auto x : a) {
    if (q.mass(Atom::plain(x)) != w) throw Error(Errc::BadPrecondition, "member is not uniform on A");
  }
  if (!std::includes(a.begin(), a.end(), ctx.c.begin(), ctx.c.end())) {
    return SparseDist::point(Atom::plain(ctx.base + 1), "delta_" + std::to_string(ctx.base + 1));
  }
  const auto b = pairing_gj(ctx, a);
  std::vector<SparseDist::Entry> entries;
  entries.emplace_back(Atom::plain(0), 1 - eta);
  for (auto x : b) entries.emplace_back(Atom::plain(x), w);
  return SparseDist(std::move(entries), "f_j(" + q.tag() + ")");
}

Rational markov_reverse(const Rational& mean, const Rational& a) {
  if (sgn(a) < 0 || a >= 1) throw Error(Errc::BadRange, "threshold a must lie in [0,1), got " + to_string(a));
  if (!in_unit_interval(mean)) throw Error(Errc::BadRange, "mean must lie in [0,1], got " + to_string(mean));
  const Rational v = (mean - a) / (1 - a);
  return sgn(v) < 0 ? Rational(0) : v;
}

}  // namespace pacnfl
