#include "pacnfl/erm.hpp"

#include <map>
#include <set>

#include "pacnfl/error.hpp"

namespace pacnfl {

BinaryHypothesis induced_classifier(const SparseDist& q) {
  std::vector<std::uint64_t> ones;
  for (const auto& [a, w] : q.entries()) {
    if (a.label != Label::One) continue;
    if (w >= q.mass(Atom::labeled(a.value, 0))) ones.push_back(a.value);
  }
  return BinaryHypothesis(std::move(ones));
}

std::vector<BinaryHypothesis> hypotheses_of(std::span<const SparseDist> q) {
  std::vector<BinaryHypothesis> out;
  std::set<std::vector<std::uint64_t>> seen;
  for (const auto& p : q) {
    BinaryHypothesis h = induced_classifier(p);
    if (seen.insert(h.ones()).second) out.push_back(std::move(h));
  }
  return out;
}

std::uint64_t empirical_errors(const BinaryHypothesis& h, const Sample& s) {
  std::uint64_t errors = 0;
  for (const Atom& a : s.atoms) {
    if (h(a.value) != a.bit()) ++errors;
  }
  return errors;
}

Rational empirical_loss(const RealHypothesis& h, const RealSample& s, const LossSpec& loss) {
  Rational total = 0;
  Rational diff;
  for (const auto& p : s.points) {
    diff = h(p.x) - p.y;
    if (sgn(diff) < 0) diff = -diff;
    total += loss.g(diff);
  }
  return total;
}

std::size_t erm_index(std::span<const BinaryHypothesis> hyps, const Sample& s) {
  if (hyps.empty()) throw Error(Errc::EmptyClass, "ERM over an empty class");
  // errors of h = (errors of the all-zero rule) + sum over its one-set of
  // (label-0 count - label-1 count); precompute the per-x balance
  std::map<std::uint64_t, std::int64_t> balance;
  std::uint64_t base = 0;
  for (const Atom& a : s.atoms) {
    if (a.bit()) {
      ++base;
      --balance[a.value];
    } else {
      ++balance[a.value];
    }
  }
  std::size_t best = 0;
  std::int64_t best_err = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    std::int64_t err = static_cast<std::int64_t>(base);
    for (auto x : hyps[i].ones()) {
      auto it = balance.find(x);
      if (it != balance.end()) err += it->second;
    }
    if (i == 0 || err < best_err) {
      best = i;
      best_err = err;
    }
  }
  return best;
}

std::size_t erm_index(std::span<const RealHypothesis> hyps, const RealSample& s, const LossSpec& loss) {
  if (hyps.empty()) throw Error(Errc::EmptyClass, "ERM over an empty class");
  std::size_t best = 0;
  Rational best_loss;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    Rational l = empirical_loss(hyps[i], s, loss);
    if (i == 0 || l < best_loss) {
      best = i;
      best_loss = std::move(l);
    }
  }
  return best;
}

}  // namespace pacnfl
