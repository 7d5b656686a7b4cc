#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pacnfl/dist.hpp"
#include "pacnfl/rational.hpp"

namespace pacnfl {

/// Observed points C_j of one sample sequence within the base {1..base}.
struct PairingContext {
  std::uint64_t base = 0;
  std::vector<std::uint64_t> c;

  static PairingContext from_sample(std::span<const Atom> sample, std::uint64_t base);
};

/// g_j(A) for C_j within A, 2|A| <= base.
///
/// With F = {1..base} \ C_j read as a cycle, the points of A \ C_j are
/// opening brackets and every other point of F a closing one; each opening
/// bracket is matched to the nearest unmatched closing bracket after it
/// (cyclically) and g_j(A) = C_j U {matched closing points}. The map keeps
/// |A| and gives A n g_j(A) = C_j; it is a bijection on the sets of that
/// size containing C_j (pairing_gj_inverse runs the matching backwards).
std::vector<std::uint64_t> pairing_gj(const PairingContext& ctx, std::span<const std::uint64_t> a);
std::vector<std::uint64_t> pairing_gj_inverse(const PairingContext& ctx, std::span<const std::uint64_t> b);

/// (1-eta) delta_0 + eta U_{g_j(A)} when C_j lies in A, delta_{base+1}
/// otherwise, for q = (1-eta) delta_0 + eta U_A.
SparseDist flip_fj(const PairingContext& ctx, const SparseDist& q);

/// max{0, (mean - a) / (1 - a)}: a lower bound on Pr[Z >= a] for Z in [0,1]
/// with E[Z] = mean.
Rational markov_reverse(const Rational& mean, const Rational& a);

}  // namespace pacnfl
