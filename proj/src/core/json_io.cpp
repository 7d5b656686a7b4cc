#include "pacnfl/json_io.hpp"

#include <charconv>

#include "pacnfl/detail/overloaded.hpp"
#include "pacnfl/error.hpp"

namespace pacnfl {

using detail::overloaded;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(Errc::ConfigError, path + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string string_from_json(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::vector<std::uint64_t> u64_list(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(u64_from_json(j[i], index(path, i)));
  return out;
}

json u64_array(const std::vector<std::uint64_t>& v) {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

json interval_json(const Interval& iv) { return json{{"lo", iv.lo}, {"hi", iv.hi}}; }

json big_json(const BigInt& z) {
  if (fits_u64(z)) return to_u64(z);
  return to_string(z);
}

EtaRule eta_rule_from_json(const json& j, const std::string& path) {
  const std::string kind = string_from_json(field(j, "kind", path), join(path, "kind"));
  if (kind == "constant") return Constant{rational_from_json(field(j, "value", path), join(path, "value"))};
  if (kind == "reciprocal") return Reciprocal{rational_from_json(field(j, "c", path), join(path, "c"))};
  if (kind == "table") {
    EtaTable t;
    const json& vals = field(j, "values", path);
    if (!vals.is_array()) bad(join(path, "values"), "expected an array");
    for (std::size_t i = 0; i < vals.size(); ++i) {
      t.values.push_back(rational_from_json(vals[i], index(join(path, "values"), i)));
    }
    t.tail = rational_from_json(field(j, "tail", path), join(path, "tail"));
    return t;
  }
  if (kind == "poly-witness") {
    return PolyWitness{u64_list(field(j, "f", path), join(path, "f")),
                       u64_from_json(field(j, "k", path), join(path, "k"))};
  }
  bad(join(path, "kind"), "unknown eta rule '" + kind + "'");
}

NRule n_rule_from_json(const json& j, const std::string& path) {
  const std::string kind = string_from_json(field(j, "kind", path), join(path, "kind"));
  if (kind == "identity") return Identity{};
  if (kind == "affine-of-target") return AffineOfTarget{u64_list(field(j, "g", path), join(path, "g"))};
  if (kind == "table") return NTable{u64_list(field(j, "values", path), join(path, "values"))};
  bad(join(path, "kind"), "unknown n rule '" + kind + "'");
}

Task task_from_json(const json& j, const std::string& path) {
  try {
    return parse_task(string_from_json(j, path));
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) bad(path, e.what());
    throw;
  }
}

Member member_from_json(const json& j, Task task, const std::string& path) {
  if (task != Task::RealValued) return dist_from_json(j, path);
  const json& vals = field(j, "values", path);
  if (!vals.is_array()) bad(join(path, "values"), "expected an array");
  std::vector<RealHypothesis::Entry> entries;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const std::string p = index(join(path, "values"), i);
    if (!vals[i].is_array() || vals[i].size() != 2) bad(p, "expected [x, \"num/den\"]");
    entries.emplace_back(u64_from_json(vals[i][0], p + "[0]"), rational_from_json(vals[i][1], p + "[1]"));
  }
  return RealHypothesis(std::move(entries));
}

}  // namespace

json rational_json(const Rational& r) { return to_string(r); }

json exact_json(const Rational& r) { return json{{"exact", to_string(r)}, {"decimal", to_double(r)}}; }

Rational rational_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return from_u64(j.get<std::uint64_t>());
    return Rational(static_cast<long>(j.get<std::int64_t>()));
  }
  if (!j.is_string()) bad(path, "expected a rational \"num/den\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error&) {
    bad(path, "malformed rational '" + j.get<std::string>() + "'");
  }
}

std::uint64_t u64_from_json(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) bad(path, "expected a non-negative integer");
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size() && !s.empty()) return v;
  }
  bad(path, "expected a non-negative integer");
}

json atom_json(const Atom& a) {
  if (a.is_labeled()) return json::array({a.value, a.bit()});
  return a.value;
}

Atom atom_from_json(const json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) bad(path, "labeled atom must be [n, b]");
    const std::uint64_t b = u64_from_json(j[1], path + "[1]");
    if (b > 1) bad(path + "[1]", "label must be 0 or 1");
    return Atom::labeled(u64_from_json(j[0], path + "[0]"), static_cast<int>(b));
  }
  return Atom::plain(u64_from_json(j, path));
}

json dist_json(const SparseDist& p) {
  json atoms = json::array();
  for (const auto& [a, w] : p.entries()) atoms.push_back(json::array({atom_json(a), to_string(w)}));
  return json{{"atoms", std::move(atoms)}, {"tag", p.tag()}};
}

SparseDist dist_from_json(const json& j, const std::string& path) {
  const json& atoms = field(j, "atoms", path);
  if (!atoms.is_array()) bad(join(path, "atoms"), "expected an array");
  std::vector<SparseDist::Entry> entries;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string p = index(join(path, "atoms"), i);
    if (!atoms[i].is_array() || atoms[i].size() != 2) bad(p, "expected [atom, \"num/den\"]");
    entries.emplace_back(atom_from_json(atoms[i][0], p + "[0]"), rational_from_json(atoms[i][1], p + "[1]"));
  }
  std::string tag;
  if (auto it = j.find("tag"); it != j.end()) tag = string_from_json(*it, join(path, "tag"));
  try {
    return SparseDist(std::move(entries), std::move(tag));
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

json hypothesis_json(const BinaryHypothesis& h) { return json{{"ones", u64_array(h.ones())}}; }

json hypothesis_json(const RealHypothesis& h) {
  json vals = json::array();
  for (const auto& [x, v] : h.values()) vals.push_back(json::array({x, to_string(v)}));
  return json{{"values", std::move(vals)}};
}

json member_json(const Member& m) {
  return std::visit([](const auto& v) -> json {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, SparseDist>) {
      return dist_json(v);
    } else {
      return hypothesis_json(v);
    }
  }, m);
}

json output_json(const Output& out) {
  return std::visit(overloaded{
                        [](const SparseDist& p) { return dist_json(p); },
                        [](const BinaryHypothesis& h) { return hypothesis_json(h); },
                        [](const RealHypothesis& h) { return hypothesis_json(h); },
                    },
                    out);
}

json sample_json(const AnySample& s) {
  json points = json::array();
  std::visit(overloaded{
                 [&](const Sample& v) {
                   for (const auto& a : v.atoms) points.push_back(atom_json(a));
                 },
                 [&](const RealSample& v) {
                   for (const auto& p : v.points) points.push_back(json::array({p.x, to_string(p.y)}));
                 },
             },
             s);
  return points;
}

LossSpec loss_from_json(const json& j, const std::string& path) {
  const std::string kind = string_from_json(field(j, "kind", path), join(path, "kind"));
  if (kind == "absolute") return LossSpec::absolute();
  if (kind == "squared") return LossSpec::squared();
  if (kind == "capped-linear") {
    try {
      return LossSpec::capped_linear(rational_from_json(field(j, "cap", path), join(path, "cap")));
    } catch (const Error& e) {
      if (e.code() == Errc::BadRange) bad(join(path, "cap"), e.what());
      throw;
    }
  }
  bad(join(path, "kind"), "unknown loss '" + kind + "'");
}

json loss_json(const LossSpec& loss) {
  switch (loss.kind()) {
    case LossSpec::Kind::Absolute:
      return json{{"kind", "absolute"}};
    case LossSpec::Kind::Squared:
      return json{{"kind", "squared"}};
    case LossSpec::Kind::CappedLinear:
      return json{{"kind", "capped-linear"}, {"cap", to_string(loss.cap())}};
  }
  return {};
}

SequenceSpec sequence_from_json(const json& eta, const json& n, const std::string& path) {
  return SequenceSpec(eta_rule_from_json(eta, join(path, "eta")), n_rule_from_json(n, join(path, "n")));
}

ClassHandle class_from_json(const json& j, const std::string& path) {
  const Task task = task_from_json(field(j, "task", path), join(path, "task"));
  std::optional<LossSpec> loss;
  if (auto it = j.find("loss"); it != j.end()) loss = loss_from_json(*it, join(path, "loss"));
  if (task == Task::RealValued && !loss) bad(join(path, "loss"), "missing (required for real-valued classes)");

  if (auto it = j.find("members"); it != j.end()) {
    if (!it->is_array()) bad(join(path, "members"), "expected an array");
    std::vector<Member> members;
    for (std::size_t i = 0; i < it->size(); ++i) {
      members.push_back(member_from_json((*it)[i], task, index(join(path, "members"), i)));
    }
    std::optional<SparseDist> marginal;
    if (auto m = j.find("marginal"); m != j.end()) marginal = dist_from_json(*m, join(path, "marginal"));
    std::string name;
    if (auto nm = j.find("name"); nm != j.end()) name = string_from_json(*nm, join(path, "name"));
    return explicit_class(task, std::move(members), std::move(marginal), std::move(name));
  }

  const json& eta = field(j, "eta", path);
  const json& n = field(j, "n", path);
  std::optional<std::uint64_t> filter;
  if (auto it = j.find("filter"); it != j.end() && !it->is_null()) filter = u64_from_json(*it, join(path, "filter"));

  const std::string n_kind = string_from_json(field(n, "kind", join(path, "n")), join(path, "n.kind"));
  if (n_kind == "constant") {
    const std::string eta_kind = string_from_json(field(eta, "kind", join(path, "eta")), join(path, "eta.kind"));
    if (eta_kind != "constant") bad(join(path, "eta.kind"), "a single family needs a constant eta");
    const Rational e = rational_from_json(field(eta, "value", join(path, "eta")), join(path, "eta.value"));
    const std::uint64_t size = u64_from_json(field(n, "value", join(path, "n")), join(path, "n.value"));
    if (filter && task != Task::Distribution) bad(join(path, "filter"), "only distribution families are filtered");
    switch (task) {
      case Task::Distribution:
        return p_eta_n(e, size, filter);
      case Task::Classification:
        return classification_stage(e, size);
      case Task::RealValued:
        return f_class(*loss, e, size);
    }
  }
  if (filter) bad(join(path, "filter"), "staged unions are not filtered");
  ClassHandle cls = stage_union(task, sequence_from_json(eta, n, path), loss);
  if (auto it = j.find("truncate"); it != j.end()) {
    cls = cls.truncate(rational_from_json(*it, join(path, "truncate")));
  }
  return cls;
}

Learner learner_from_json(const json& j, const ClassHandle& cls, const std::string& path, std::uint64_t budget) {
  const std::string kind = string_from_json(field(j, "kind", path), join(path, "kind"));
  if (kind == "scheffe") return scheffe_learner(cls, budget);
  if (kind == "erm") return erm_learner(cls, budget);
  if (kind == "empirical-baseline") return empirical_baseline(cls.task(), cls.loss());
  if (kind == "truncation") {
    return truncation_learner(cls, rational_from_json(field(j, "eps", path), join(path, "eps")), budget);
  }
  if (kind == "constant") {
    const Member m = cls.materialize(from_u64_big(u64_from_json(field(j, "member", path), join(path, "member"))));
    Output out = std::visit([](const auto& v) -> Output { return v; }, m);
    return constant_learner(std::move(out), cls.task(), cls.loss());
  }
  if (kind == "union") {
    const json& parts = field(j, "learners", path);
    if (!parts.is_array() || parts.empty()) bad(join(path, "learners"), "expected a non-empty array");
    std::vector<Learner> ls;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string p = index(join(path, "learners"), i);
      ClassHandle sub = cls;
      if (auto c = parts[i].find("class"); c != parts[i].end()) sub = class_from_json(*c, join(p, "class"));
      ls.push_back(learner_from_json(parts[i], sub, p, budget));
    }
    return union_learner(std::move(ls));
  }
  bad(join(path, "kind"), "unknown learner '" + kind + "'");
}

GrowthRule rule_from_json(const json& j, const std::string& path) {
  const std::string kind = string_from_json(field(j, "kind", path), join(path, "kind"));
  if (kind == "polynomial") {
    const json& c = field(j, "coeffs", path);
    if (!c.is_array()) bad(join(path, "coeffs"), "expected an array");
    Polynomial p;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_number_integer()) bad(index(join(path, "coeffs"), i), "expected an integer");
      p.coeffs.push_back(c[i].get<std::int64_t>());
    }
    return p;
  }
  if (kind == "exponential") {
    Exponential e;
    e.base = u64_from_json(field(j, "base", path), join(path, "base"));
    if (auto it = j.find("coef"); it != j.end()) e.coef = it->get<std::int64_t>();
    if (auto it = j.find("offset"); it != j.end()) e.offset = it->get<std::int64_t>();
    return e;
  }
  bad(join(path, "kind"), "unknown rule '" + kind + "'");
}

FunctionTable table_from_json(const json& j, const std::string& path) {
  if (j.is_array()) return FunctionTable(u64_list(j, path));
  const GrowthRule rule = rule_from_json(field(j, "rule", path), join(path, "rule"));
  const std::uint64_t k_max = u64_from_json(field(j, "k_max", path), join(path, "k_max"));
  if (k_max == 0) bad(join(path, "k_max"), "must be >= 1");
  try {
    return FunctionTable::from_rule(rule, k_max);
  } catch (const Error& e) {
    if (e.code() == Errc::BadRange) bad(path, e.what());
    throw;
  }
}

FunctionTable table_from_csv(std::string_view text, const std::string& path) {
  std::vector<std::uint64_t> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) bad(where, "expected 'k,value'");
    std::uint64_t k = 0, v = 0;
    const auto ks = line.substr(0, comma), vs = line.substr(comma + 1);
    const auto rk = std::from_chars(ks.data(), ks.data() + ks.size(), k);
    const auto rv = std::from_chars(vs.data(), vs.data() + vs.size(), v);
    const bool ok = rk.ec == std::errc() && rk.ptr == ks.data() + ks.size() && rv.ec == std::errc() &&
                    rv.ptr == vs.data() + vs.size();
    if (!ok) {
      if (values.empty() && line_no == 1) continue;  // header
      bad(where, "expected 'k,value'");
    }
    if (k != values.size() + 1) bad(where, "rows must list k = 1, 2, ... in order");
    values.push_back(v);
  }
  if (values.empty()) bad(path, "empty table");
  return FunctionTable(std::move(values));
}

json exact_report_json(const ExactOracleReport& r) {
  json learners = json::array();
  for (const auto& l : r.learners) {
    json expected = json::array(), tail = json::array();
    for (const auto& v : l.expected) expected.push_back(to_string(v));
    for (const auto& v : l.tail) tail.push_back(to_string(v));
    learners.push_back(json{{"learner", l.learner},
                            {"average", exact_json(l.average)},
                            {"max", exact_json(l.max)},
                            {"tail_average", exact_json(l.tail_average)},
                            {"tail_max", exact_json(l.tail_max)},
                            {"markov_average", exact_json(l.markov_average)},
                            {"markov_max", exact_json(l.markov_max)},
                            {"above_bound", l.average >= r.bound},
                            {"expected", std::move(expected)},
                            {"tail", std::move(tail)}});
  }
  json out{{"task", std::string(task_name(r.task))},
           {"eta", rational_json(r.eta)},
           {"points", r.points},
           {"filter", r.filter ? json(*r.filter) : json(nullptr)},
           {"m", r.m},
           {"members", r.members},
           {"sequences", big_json(r.sequences)},
           {"bound", exact_json(r.bound)},
           {"eta_over_4", exact_json(r.eta_over_4)},
           {"eta_over_8", exact_json(r.eta_over_8)},
           {"threshold", exact_json(r.threshold)},
           {"delta_fixed", exact_json(r.delta_fixed)},
           {"delta_consistent", exact_json(r.delta_consistent)},
           {"learners", std::move(learners)}};
  return out;
}

json audit_json(const PairingAudit& a) {
  return json{{"sequences", a.sequences},
              {"pairs", a.pairs},
              {"cardinality_violations", a.cardinality_violations},
              {"intersection_violations", a.intersection_violations},
              {"involution_violations", a.involution_violations},
              {"inverse_violations", a.inverse_violations},
              {"family_violations", a.family_violations},
              {"measure_violations", a.measure_violations},
              {"bijection_violations", a.bijection_violations},
              {"measure_checks", a.measure_checks}};
}

json risk_json(const RiskEstimate& r) {
  json members = json::array();
  for (const auto& m : r.members) {
    members.push_back(json{{"ordinal", big_json(m.ordinal)},
                           {"trials", m.trials},
                           {"loss_sum", rational_json(m.loss_sum)},
                           {"mean", m.mean},
                           {"mean_ci", interval_json(m.mean_ci)},
                           {"failures", m.failures},
                           {"failure_ci", interval_json(m.failure_ci)}});
  }
  return json{{"m", r.m}, {"trials", r.trials}, {"average", r.average}, {"max", r.max}, {"members", std::move(members)}};
}

json curve_point_json(const CurvePoint& c) {
  json probes = json::array();
  for (const auto& p : c.probes) {
    probes.push_back(json{{"m", p.m},
                          {"failures", p.failures},
                          {"ucb", p.ucb},
                          {"worst_target", big_json(p.worst_target)},
                          {"pass", p.pass}});
  }
  json targets = json::array();
  for (const auto& t : c.targets) targets.push_back(big_json(t));
  return json{{"epsilon", exact_json(c.eps)},
              {"delta", exact_json(c.delta)},
              {"m_hat", c.m_hat},
              {"bracket_lo", c.bracket_lo},
              {"trials", c.trials},
              {"failures", c.failures},
              {"ucb", c.ucb},
              {"worst_target", big_json(c.worst_target)},
              {"targets", std::move(targets)},
              {"probes", std::move(probes)}};
}

json certificate_json(const DominanceCertificate& c) {
  return json{{"horizon", c.horizon},
              {"dominates", c.dominates()},
              {"witness", c.witness ? json(*c.witness) : json(nullptr)},
              {"fails_at", c.fails_at ? json(*c.fails_at) : json(nullptr)}};
}

json table_json(const FunctionTable& t) {
  json out{{"values", u64_array(t.values())}};
  if (t.rule()) out["rule"] = describe(*t.rule());
  return out;
}

json synthesis_json(const SynthesisReport& r) {
  json eta = json::array();
  for (const auto& e : r.eta_bar) eta.push_back(to_string(e));
  json out{{"g", table_json(r.g)},
           {"class", r.class_description},
           {"eta_bar", std::move(eta)},
           {"n_bar", u64_array(r.n_bar)},
           {"lb", u64_array(r.lb)},
           {"certificate", certificate_json(r.certificate)},
           {"strict", r.strict},
           {"asymptotic", r.asymptotic ? json(std::string(asymptotic_name(*r.asymptotic))) : json(nullptr)}};
  if (r.spot) {
    const SpotCheck& s = *r.spot;
    out["spot_check"] = json{{"k", s.k},
                             {"eta", rational_json(s.eta)},
                             {"r", s.r},
                             {"base", s.base},
                             {"accuracy", exact_json(s.accuracy)},
                             {"delta_used", "consistent"},
                             {"delta_consistent", exact_json(s.delta_consistent)},
                             {"delta_fixed", exact_json(s.delta_fixed)},
                             {"g_k", s.target_value},
                             {"exceeds", s.exceeds},
                             {"curve", curve_point_json(s.point)}};
  } else {
    out["spot_check"] = nullptr;
  }
  return out;
}

}  // namespace pacnfl
