#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pacnfl/dist.hpp"
#include "pacnfl/hypothesis.hpp"
#include "pacnfl/loss.hpp"
#include "pacnfl/sample.hpp"

namespace pacnfl {

/// h(x) = 1 iff (x,1) carries positive mass and q(x,1) >= q(x,0). The
/// restriction to the support keeps the one-set finite.
BinaryHypothesis induced_classifier(const SparseDist& q);

/// H(Q): induced classifiers of the class members, first occurrence kept.
std::vector<BinaryHypothesis> hypotheses_of(std::span<const SparseDist> q);

/// Number of sample points (x, y) with h(x) != y.
std::uint64_t empirical_errors(const BinaryHypothesis& h, const Sample& s);
/// sum over the sample of g(|h(x) - y|), unnormalized.
Rational empirical_loss(const RealHypothesis& h, const RealSample& s, const LossSpec& loss);

/// Lowest-index empirical risk minimizer. Throws EmptyClass.
std::size_t erm_index(std::span<const BinaryHypothesis> hyps, const Sample& s);
std::size_t erm_index(std::span<const RealHypothesis> hyps, const RealSample& s, const LossSpec& loss);

}  // namespace pacnfl
