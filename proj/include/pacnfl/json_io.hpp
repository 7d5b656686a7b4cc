#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "pacnfl/dist.hpp"
#include "pacnfl/dominance.hpp"
#include "pacnfl/exact.hpp"
#include "pacnfl/family.hpp"
#include "pacnfl/hypothesis.hpp"
#include "pacnfl/learner.hpp"
#include "pacnfl/montecarlo.hpp"

namespace pacnfl {

using json = nlohmann::ordered_json;

// Parse errors are Error(ConfigError) whose message starts with the field
// path, e.g. "class.eta.c: expected a rational".

/// "num/den"
json rational_json(const Rational& r);
/// {"exact": "num/den", "decimal": d}
json exact_json(const Rational& r);
/// Accepts "a/b", "a" or an integer.
Rational rational_from_json(const json& j, const std::string& path);
std::uint64_t u64_from_json(const json& j, const std::string& path);

json atom_json(const Atom& a);
Atom atom_from_json(const json& j, const std::string& path);

/// {"atoms": [[atom, "num/den"], ...], "tag": ...}
json dist_json(const SparseDist& p);
SparseDist dist_from_json(const json& j, const std::string& path);

json hypothesis_json(const BinaryHypothesis& h);
json hypothesis_json(const RealHypothesis& h);
json member_json(const Member& m);
json output_json(const Output& out);
json sample_json(const AnySample& s);

/// {"task", "eta": {"kind", ...}, "n": {"kind", ...}, "filter", "loss"}.
/// A constant n gives a single parametric family; any other n rule gives a
/// staged union.
ClassHandle class_from_json(const json& j, const std::string& path);
LossSpec loss_from_json(const json& j, const std::string& path);
json loss_json(const LossSpec& loss);
SequenceSpec sequence_from_json(const json& eta, const json& n, const std::string& path);

/// {"kind": "scheffe"|"truncation"|"erm"|"union"|"empirical-baseline", ...}
Learner learner_from_json(const json& j, const ClassHandle& cls, const std::string& path,
                          std::uint64_t budget = kDefaultBudget);

/// Inline array of values for k = 1..K, or {"rule": {...}, "k_max": K}.
FunctionTable table_from_json(const json& j, const std::string& path);
/// Header-optional CSV with rows "k,value" for k = 1..K in order.
FunctionTable table_from_csv(std::string_view text, const std::string& path);
GrowthRule rule_from_json(const json& j, const std::string& path);

json exact_report_json(const ExactOracleReport& r);
json audit_json(const PairingAudit& a);
json risk_json(const RiskEstimate& r);
json curve_point_json(const CurvePoint& c);
json certificate_json(const DominanceCertificate& c);
json table_json(const FunctionTable& t);
json synthesis_json(const SynthesisReport& r);

}  // namespace pacnfl
