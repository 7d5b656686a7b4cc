#include "pacnfl/runner.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "pacnfl/pairing.hpp"

#ifndef PACNFL_VERSION
#define PACNFL_VERSION "0.0.0"
#endif

namespace pacnfl {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(Errc::ConfigError, path + ": " + what);
}

const json& need(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) bad(key, "missing");
  return *it;
}

const json* maybe(const json& body, const char* key) {
  auto it = body.find(key);
  return it == body.end() ? nullptr : &*it;
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  return to_double(rational_from_json(j, path));
}

std::uint64_t u64_or(const json& body, const char* key, std::uint64_t fallback) {
  const json* j = maybe(body, key);
  return j ? u64_from_json(*j, key) : fallback;
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::filesystem::path& p, const std::string& path) {
  std::ifstream in(p, std::ios::binary);
  if (!in) bad(path, "cannot read '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write '" + p.string() + "'");
  out << bytes;
  if (!out) throw Error(Errc::Io, "write failed for '" + p.string() + "'");
}

// Everything a subcommand produces besides the manifest.
struct Artifacts {
  json result;
  std::vector<AssertionResult> assertions;
  std::optional<std::string> curve_csv;
  std::optional<std::string> plot_csv;
};

class Context {
 public:
  explicit Context(const ExperimentConfig& c) : cfg(c), body(c.body) {}

  ClassHandle cls(const json& j, const std::string& path) const { return class_from_json(j, path); }

  FunctionTable table(const json& j, const std::string& path) const {
    if (j.is_object() && j.contains("csv")) {
      const json& f = j.at("csv");
      if (!f.is_string()) bad(path + ".csv", "expected a path");
      const auto file = cfg.base_dir / f.get<std::string>();
      return table_from_csv(read_file(file, path + ".csv"), file.string());
    }
    return table_from_json(j, path);
  }

  RngStream rng() const { return RngStream(cfg.seed, 0); }

  const ExperimentConfig& cfg;
  const json& body;
};

void check(std::vector<AssertionResult>& out, std::string name, bool ok, std::string detail) {
  out.push_back(AssertionResult{std::move(name), ok, std::move(detail)});
}

json assertions_json(const std::vector<AssertionResult>& as) {
  json a = json::array();
  for (const auto& r : as) a.push_back(json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  return a;
}

std::uint64_t advertised_m(const json& learner, const ClassHandle& cls, const json& adv, const std::string& path) {
  const Rational eps = rational_from_json(need(adv, "eps"), path + ".eps");
  const Rational delta = rational_from_json(need(adv, "delta"), path + ".delta");
  const std::string kind = learner.value("kind", "");
  if (kind == "scheffe") return scheffe_m_for(cls.size(), eps, delta);
  if (kind == "truncation") return truncation_m_for(cls.sequence(), eps, delta);
  if (kind == "erm") return finite_erm_m_for(cls.size(), eps, delta);
  if (kind == "union") return union_m_for(learner.at("learners").size(), eps, delta);
  bad(path, "learner '" + kind + "' advertises no sample size");
}

std::uint64_t sample_size_of(const json& j, const json& learner, const ClassHandle& cls, const std::string& path) {
  if (j.is_object()) {
    if (!j.contains("advertised")) bad(path, "expected an integer or {\"advertised\": {...}}");
    return advertised_m(learner, cls, j.at("advertised"), path + ".advertised");
  }
  return u64_from_json(j, path);
}

std::vector<const json*> list_of(const json& j) {
  std::vector<const json*> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(&e);
  } else {
    out.push_back(&j);
  }
  return out;
}

// ---------------------------------------------------------------- construct

Artifacts run_construct(const Context& ctx) {
  Artifacts a;
  const ClassHandle cls = ctx.cls(need(ctx.body, "class"), "class");
  json members = json::array();
  std::uint64_t listed = 0;
  if (const json* idx = maybe(ctx.body, "indices")) {
    if (!idx->is_array()) bad("indices", "expected an array of [stage, ordinal]");
    for (std::size_t i = 0; i < idx->size(); ++i) {
      const std::string p = index_path("indices", i);
      const json& e = (*idx)[i];
      MemberIndex mi;
      if (e.is_array() && e.size() == 2) {
        mi.stage = u64_from_json(e[0], p + "[0]");
        mi.ordinal = from_u64_big(u64_from_json(e[1], p + "[1]"));
      } else {
        mi.ordinal = from_u64_big(u64_from_json(e, p));
      }
      members.push_back(json{{"stage", mi.stage}, {"ordinal", to_u64(mi.ordinal)}, {"member", member_json(cls.materialize(mi))}});
      ++listed;
    }
  } else {
    if (!cls.is_finite()) bad("indices", "required for a staged union");
    const std::uint64_t n = to_u64(cls.size());
    const std::uint64_t limit = std::min(n, u64_or(ctx.body, "limit", n));
    if (limit > ctx.cfg.budget) {
      throw Error(Errc::ClassTooLarge, "listing " + std::to_string(limit) + " members exceeds the budget");
    }
    for (std::uint64_t i = 0; i < limit; ++i) {
      json e{{"ordinal", i}, {"member", member_json(cls.materialize(from_u64_big(i)))}};
      if (cls.shape()) {
        json sub = json::array();
        for (auto x : cls.subset(from_u64_big(i))) sub.push_back(x);
        e["subset"] = std::move(sub);
      }
      members.push_back(std::move(e));
    }
    listed = limit;
  }
  a.result = json{{"class", cls.describe()},
                  {"task", std::string(task_name(cls.task()))},
                  {"size", cls.size_text()},
                  {"listed", listed},
                  {"members", std::move(members)}};
  if (const json* as = maybe(ctx.body, "assert")) {
    if (const json* m = maybe(*as, "members")) {
      const std::string size = cls.size_text();
      const std::string want = m->is_string() ? m->get<std::string>() : std::to_string(u64_from_json(*m, "assert.members"));
      check(a.assertions, "members", size == want, "size " + size + ", expected " + want);
    }
  }
  return a;
}

// -------------------------------------------------------------------- learn

Artifacts run_learn(const Context& ctx) {
  Artifacts a;
  const ClassHandle cls = ctx.cls(need(ctx.body, "class"), "class");
  const json& lspec = need(ctx.body, "learner");
  const Learner learner = learner_from_json(lspec, cls, "learner", ctx.cfg.budget);
  const std::uint64_t m = sample_size_of(need(ctx.body, "m"), lspec, cls, "m");

  // The target is a member of the class, or of one stage of a staged union.
  const json& tj = need(ctx.body, "target");
  ClassHandle holder = cls;
  BigInt ordinal;
  json target_desc;
  if (tj.is_object()) {
    const std::uint64_t stage = u64_from_json(need(tj, "stage"), "target.stage");
    ordinal = from_u64_big(u64_from_json(need(tj, "ordinal"), "target.ordinal"));
    holder = cls.stage(stage);
    target_desc = json{{"stage", stage}, {"ordinal", to_u64(ordinal)}};
  } else {
    ordinal = from_u64_big(u64_from_json(tj, "target"));
    target_desc = json{{"ordinal", to_u64(ordinal)}};
  }
  const Target target = target_of(holder, ordinal);
  AnySample s;
  if (const auto* p = std::get_if<SparseDist>(&target)) {
    s = draw(*p, m, ctx.rng());
  } else {
    s = draw(std::get<RealTarget>(target), m, ctx.rng());
  }
  const Output out = learner(s);
  const Rational loss = TaskLoss::for_class(cls)(out, target);

  a.result = json{{"class", cls.describe()}, {"learner", learner.name()}, {"alpha", learner.alpha()},
                  {"m", m},                  {"target", target_desc},     {"output", output_json(out)},
                  {"loss", exact_json(loss)}};
  if (m <= u64_or(ctx.body, "echo_sample_max", 1000)) a.result["sample"] = sample_json(s);
  if (const json* as = maybe(ctx.body, "assert")) {
    if (const json* ml = maybe(*as, "max_loss")) {
      const Rational cap = rational_from_json(*ml, "assert.max_loss");
      check(a.assertions, "max_loss", loss <= cap, "loss " + to_string(loss) + " vs " + to_string(cap));
    }
  }
  return a;
}

// -------------------------------------------------------- sample-complexity

Artifacts run_sample_complexity(const Context& ctx) {
  Artifacts a;
  const ClassHandle cls = ctx.cls(need(ctx.body, "class"), "class");
  const Learner learner = learner_from_json(need(ctx.body, "learner"), cls, "learner", ctx.cfg.budget);

  struct Row {
    std::uint64_t k;
    Rational eps;
  };
  std::vector<Row> rows;
  if (const json* ks = maybe(ctx.body, "ks")) {
    if (!ks->is_array()) bad("ks", "expected an array");
    for (std::size_t i = 0; i < ks->size(); ++i) {
      const std::uint64_t k = u64_from_json((*ks)[i], index_path("ks", i));
      if (k == 0) bad(index_path("ks", i), "must be >= 1");
      rows.push_back(Row{k, Rational(1) / from_u64(k)});
    }
  } else {
    const json& es = need(ctx.body, "epsilons");
    if (!es.is_array()) bad("epsilons", "expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
      rows.push_back(Row{i + 1, rational_from_json(es[i], index_path("epsilons", i))});
    }
  }
  if (rows.empty()) bad("epsilons", "empty");

  EstimateProtocol p;
  p.delta = rational_from_json(need(ctx.body, "delta"), "delta");
  p.trials = u64_or(ctx.body, "trials", p.trials);
  p.m_min = u64_or(ctx.body, "m_min", p.m_min);
  p.m_max = u64_or(ctx.body, "m_max", p.m_max);
  p.max_targets = u64_or(ctx.body, "max_targets", p.max_targets);
  if (const json* c = maybe(ctx.body, "confidence")) p.confidence = number_from_json(*c, "confidence");
  p.jobs = ctx.cfg.jobs;
  p.budget = ctx.cfg.budget;
  if (const json* b = maybe(ctx.body, "benchmark")) p.benchmark = ctx.cls(*b, "benchmark");
  if (const json* t = maybe(ctx.body, "targets")) {
    for (std::size_t i = 0; i < t->size(); ++i) {
      p.targets.push_back(from_u64_big(u64_from_json((*t)[i], index_path("targets", i))));
    }
  }

  json points = json::array();
  std::string curve = "k,epsilon,delta,m_hat,trials,failures,ucb\n";
  std::string plot = "k,m_hat\n";
  std::vector<std::uint64_t> m_hats;
  for (const auto& row : rows) {
    p.eps = row.eps;
    const CurvePoint cp = estimate_m(cls, learner, p, ctx.rng());
    json pj = curve_point_json(cp);
    pj["k"] = row.k;
    points.push_back(std::move(pj));
    curve += std::to_string(row.k) + "," + fmt(to_double(cp.eps)) + "," + fmt(to_double(cp.delta)) + "," +
             std::to_string(cp.m_hat) + "," + std::to_string(cp.trials) + "," + std::to_string(cp.failures) + "," +
             fmt(cp.ucb) + "\n";
    plot += std::to_string(row.k) + "," + std::to_string(cp.m_hat) + "\n";
    m_hats.push_back(cp.m_hat);
  }
  a.result = json{{"class", cls.describe()}, {"learner", learner.name()}, {"alpha", learner.alpha()},
                  {"confidence", p.confidence}, {"curve", std::move(points)}};
  a.curve_csv = std::move(curve);
  a.plot_csv = std::move(plot);

  if (const json* as = maybe(ctx.body, "assert")) {
    if (const json* lo = maybe(*as, "m_hat_min")) {
      const std::uint64_t v = u64_from_json(*lo, "assert.m_hat_min");
      for (std::size_t i = 0; i < m_hats.size(); ++i) {
        check(a.assertions, "m_hat_min[" + std::to_string(i) + "]", m_hats[i] >= v,
              "m_hat " + std::to_string(m_hats[i]) + " >= " + std::to_string(v));
      }
    }
    if (const json* hi = maybe(*as, "m_hat_max")) {
      const std::uint64_t v = u64_from_json(*hi, "assert.m_hat_max");
      for (std::size_t i = 0; i < m_hats.size(); ++i) {
        check(a.assertions, "m_hat_max[" + std::to_string(i) + "]", m_hats[i] <= v,
              "m_hat " + std::to_string(m_hats[i]) + " <= " + std::to_string(v));
      }
    }
  }
  return a;
}

// ---------------------------------------------------------------- nfl-exact

Artifacts run_nfl_exact(const Context& ctx) {
  Artifacts a;
  const ClassHandle cls = ctx.cls(need(ctx.body, "class"), "class");
  const ExactOptions opt{ctx.cfg.exact_budget, ctx.cfg.jobs};

  struct Run {
    std::uint64_t m;
    std::vector<Learner> learners;
  };
  std::vector<Run> runs;
  auto learners_of = [&](const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected a non-empty array");
    std::vector<Learner> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(learner_from_json(j[i], cls, index_path(path, i), ctx.cfg.budget));
    }
    return out;
  };
  if (const json* rs = maybe(ctx.body, "runs")) {
    for (std::size_t i = 0; i < rs->size(); ++i) {
      const std::string p = index_path("runs", i);
      runs.push_back(Run{u64_from_json(need((*rs)[i], "m"), p + ".m"), learners_of(need((*rs)[i], "learners"), p + ".learners")});
    }
  } else {
    const auto ls = learners_of(need(ctx.body, "learners"), "learners");
    const auto ms = list_of(need(ctx.body, "m"));
    for (std::size_t i = 0; i < ms.size(); ++i) runs.push_back(Run{u64_from_json(*ms[i], "m"), ls});
  }
  const bool audit = ctx.body.value("audit", false);

  json reports = json::array();
  std::string plot = "m,series,value\n";
  const json* as = maybe(ctx.body, "assert");
  for (const auto& run : runs) {
    const ExactOracleReport r = nfl_exact(cls, run.learners, run.m, opt);
    json rj = exact_report_json(r);
    plot += std::to_string(r.m) + ",bound," + fmt(to_double(r.bound)) + "\n";
    for (const auto& l : r.learners) plot += std::to_string(r.m) + "," + l.learner + "," + fmt(to_double(l.average)) + "\n";
    if (audit) {
      const PairingAudit pa = audit_pairing(cls, run.m, opt);
      rj["pairing_audit"] = audit_json(pa);
      if (as && as->value("pairing_clean", false)) {
        const std::uint64_t v = pa.cardinality_violations + pa.intersection_violations + pa.inverse_violations +
                                pa.family_violations + pa.measure_violations + pa.bijection_violations;
        check(a.assertions, "pairing_clean[m=" + std::to_string(r.m) + "]", v == 0,
              std::to_string(v) + " violations over " + std::to_string(pa.pairs) + " pairs");
      }
    }
    if (as) {
      const std::string tag = "[m=" + std::to_string(r.m) + "]";
      if (as->value("learners_above_bound", false)) {
        for (const auto& l : r.learners) {
          check(a.assertions, "above_bound" + tag + "[" + l.learner + "]", l.average >= r.bound,
                to_string(l.average) + " >= " + to_string(r.bound));
        }
      }
      if (as->value("markov_consistent", false)) {
        for (const auto& l : r.learners) {
          check(a.assertions, "markov" + tag + "[" + l.learner + "]", l.markov_average <= l.tail_average,
                to_string(l.markov_average) + " <= " + to_string(l.tail_average));
        }
      }
      if (const json* b = maybe(*as, "bound")) {
        if (const json* want = maybe(*b, std::to_string(r.m).c_str())) {
          const Rational w = rational_from_json(*want, "assert.bound." + std::to_string(r.m));
          check(a.assertions, "bound" + tag, r.bound == w, to_string(r.bound) + " == " + to_string(w));
        }
      }
    }
    reports.push_back(std::move(rj));
  }
  a.result = json{{"class", cls.describe()}, {"runs", std::move(reports)}};
  a.plot_csv = std::move(plot);
  return a;
}

// ------------------------------------------------------------------- nfl-mc

Artifacts run_nfl_mc(const Context& ctx) {
  Artifacts a;
  const ClassHandle cls = ctx.cls(need(ctx.body, "class"), "class");
  const auto lspecs = list_of(need(ctx.body, "learners"));
  const std::uint64_t trials = u64_or(ctx.body, "trials", 200);
  McOptions opt;
  if (const json* t = maybe(ctx.body, "threshold")) opt.threshold = rational_from_json(*t, "threshold");
  if (const json* c = maybe(ctx.body, "confidence")) opt.confidence = number_from_json(*c, "confidence");
  opt.jobs = ctx.cfg.jobs;
  opt.budget = ctx.cfg.budget;
  if (const json* t = maybe(ctx.body, "targets")) {
    for (std::size_t i = 0; i < t->size(); ++i) {
      opt.targets.push_back(from_u64_big(u64_from_json((*t)[i], index_path("targets", i))));
    }
  }
  const auto ms = list_of(need(ctx.body, "m"));
  const json* as = maybe(ctx.body, "assert");

  json runs = json::array();
  std::string plot = "learner,m,failure_rate,ucb,average_loss\n";
  for (std::size_t li = 0; li < lspecs.size(); ++li) {
    const Learner learner = learner_from_json(*lspecs[li], cls, index_path("learners", li), ctx.cfg.budget);
    for (std::size_t mi = 0; mi < ms.size(); ++mi) {
      const std::uint64_t m = sample_size_of(*ms[mi], *lspecs[li], cls, index_path("m", mi));
      const RiskEstimate est = mc_risk(cls, learner, m, trials, ctx.rng(), opt);
      std::uint64_t worst = 0;
      double ucb = 0;
      for (const auto& r : est.members) {
        worst = std::max(worst, r.failures);
        ucb = std::max(ucb, r.failure_ci.hi);
      }
      const double rate = static_cast<double>(worst) / static_cast<double>(trials);
      plot += learner.name() + "," + std::to_string(m) + "," + fmt(rate) + "," + fmt(ucb) + "," + fmt(est.average) + "\n";
      json rj = risk_json(est);
      rj["learner"] = learner.name();
      rj["max_failure_rate"] = rate;
      rj["max_failure_ucb"] = ucb;
      const std::string tag = "[" + learner.name() + ",m=" + std::to_string(m) + "]";
      if (as) {
        if (const json* u = maybe(*as, "max_failure_ucb")) {
          const double cap = number_from_json(*u, "assert.max_failure_ucb");
          check(a.assertions, "max_failure_ucb" + tag, ucb <= cap, fmt(ucb) + " <= " + fmt(cap));
        }
        if (const json* s = maybe(*as, "min_success_rate")) {
          const double lo = number_from_json(*s, "assert.min_success_rate");
          check(a.assertions, "min_success_rate" + tag, 1.0 - rate >= lo, fmt(1.0 - rate) + " >= " + fmt(lo));
        }
      }
      runs.push_back(std::move(rj));
    }
  }
  a.result = json{{"class", cls.describe()}, {"trials", trials}, {"runs", std::move(runs)}};
  a.plot_csv = std::move(plot);
  return a;
}

// ----------------------------------------------------------------- dominate

Artifacts run_dominate(const Context& ctx) {
  Artifacts a;
  const json* as = maybe(ctx.body, "assert");
  std::string plot;
  if (const json* ts = maybe(ctx.body, "tables")) {
    if (!ts->is_array()) bad("tables", "expected an array");
    std::vector<FunctionTable> tables;
    for (std::size_t i = 0; i < ts->size(); ++i) tables.push_back(ctx.table((*ts)[i], index_path("tables", i)));
    const FunctionTable f = diagonal(tables);
    json certs = json::array();
    bool within = true;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const DominanceCertificate c = dominates_prefix(f, tables[i]);
      within = within && c.witness && *c.witness <= i + 1;
      json cj = certificate_json(c);
      cj["index"] = i + 1;
      certs.push_back(std::move(cj));
    }
    a.result = json{{"diagonal", table_json(f)}, {"certificates", std::move(certs)}};
    plot = "k,diagonal";
    for (std::size_t i = 0; i < tables.size(); ++i) plot += ",g" + std::to_string(i + 1);
    plot += "\n";
    for (std::uint64_t k = 1; k <= f.size(); ++k) {
      plot += std::to_string(k) + "," + std::to_string(f.at(k));
      for (const auto& t : tables) plot += "," + std::to_string(t.at(k));
      plot += "\n";
    }
    if (as && as->value("witness_within_index", false)) {
      check(a.assertions, "witness_within_index", within, "every witness <= its list index");
    }
  } else {
    const FunctionTable f = ctx.table(need(ctx.body, "f"), "f");
    const FunctionTable g = ctx.table(need(ctx.body, "g"), "g");
    const DominanceCertificate c = dominates_prefix(f, g);
    a.result = json{{"f", table_json(f)}, {"g", table_json(g)}, {"certificate", certificate_json(c)}};
    if (f.rule() && g.rule()) {
      a.result["asymptotic"] = std::string(asymptotic_name(asymptotic_dominates(*f.rule(), *g.rule())));
    } else {
      a.result["asymptotic"] = nullptr;
    }
    plot = "k,f,g\n";
    for (std::uint64_t k = 1; k <= f.size(); ++k) {
      plot += std::to_string(k) + "," + std::to_string(f.at(k)) + "," + std::to_string(g.at(k)) + "\n";
    }
    if (as) {
      if (const json* d = maybe(*as, "dominates")) {
        check(a.assertions, "dominates", c.dominates() == d->get<bool>(),
              std::string("certificate ") + (c.dominates() ? "dominates" : "fails"));
      }
    }
  }
  a.plot_csv = std::move(plot);
  return a;
}

// --------------------------------------------------------------- synthesize

Artifacts run_synthesize(const Context& ctx) {
  Artifacts a;
  const FunctionTable g = ctx.table(need(ctx.body, "g"), "g");
  std::optional<SpotCheckOptions> spot;
  if (const json* s = maybe(ctx.body, "spot_check")) {
    SpotCheckOptions o;
    o.k = u64_or(*s, "k", o.k);
    o.r = u64_or(*s, "r", o.r);
    o.trials = u64_or(*s, "trials", o.trials);
    o.max_targets = u64_or(*s, "max_targets", o.max_targets);
    o.m_max = u64_or(*s, "m_max", o.m_max);
    o.jobs = ctx.cfg.jobs;
    o.seed = ctx.cfg.seed;
    spot = o;
  }
  const SynthesisReport r = cofinality_pipeline(g, spot);
  a.result = synthesis_json(r);

  std::string plot = "k,g,lb\n";
  for (std::uint64_t k = 1; k <= g.size(); ++k) {
    plot += std::to_string(k) + "," + std::to_string(g.at(k)) + "," + std::to_string(r.lb[k - 1]) + "\n";
  }
  a.plot_csv = std::move(plot);
  if (r.spot) {
    const CurvePoint& cp = r.spot->point;
    a.curve_csv = "k,epsilon,delta,m_hat,trials,failures,ucb\n" + std::to_string(r.spot->k) + "," +
                  fmt(to_double(cp.eps)) + "," + fmt(to_double(cp.delta)) + "," + std::to_string(cp.m_hat) + "," +
                  std::to_string(cp.trials) + "," + std::to_string(cp.failures) + "," + fmt(cp.ucb) + "\n";
  }
  if (const json* as = maybe(ctx.body, "assert")) {
    if (as->value("strict", false)) check(a.assertions, "strict", r.strict, "LB(k) > g(k) on 1..K");
    if (const json* lb = maybe(*as, "lb")) {
      std::vector<std::uint64_t> want;
      for (std::size_t i = 0; i < lb->size(); ++i) want.push_back(u64_from_json((*lb)[i], index_path("assert.lb", i)));
      check(a.assertions, "lb", want == r.lb, "LB table matches");
    }
    if (as->value("spot_exceeds", false)) {
      const bool ok = r.spot && r.spot->exceeds;
      check(a.assertions, "spot_exceeds", ok,
            r.spot ? "m_hat " + std::to_string(r.spot->point.m_hat) + " > g(k) = " + std::to_string(r.spot->target_value)
                   : "no spot check configured");
    }
  }
  return a;
}

Artifacts dispatch(const Context& ctx) {
  switch (ctx.cfg.command) {
    case Subcommand::Construct:
      return run_construct(ctx);
    case Subcommand::Learn:
      return run_learn(ctx);
    case Subcommand::SampleComplexity:
      return run_sample_complexity(ctx);
    case Subcommand::NflExact:
      return run_nfl_exact(ctx);
    case Subcommand::NflMc:
      return run_nfl_mc(ctx);
    case Subcommand::Dominate:
      return run_dominate(ctx);
    case Subcommand::Synthesize:
      return run_synthesize(ctx);
  }
  throw Error(Errc::ConfigError, "command: unknown");
}

struct Evaluated {
  RunResult result;
  Artifacts artifacts;
};

Evaluated evaluate_full(const ExperimentConfig& config) {
  Context ctx(config);
  Evaluated e;
  e.artifacts = dispatch(ctx);
  e.result.assertions = e.artifacts.assertions;
  e.result.report = json{{"command", std::string(subcommand_name(config.command))},
                         {"seed", config.seed},
                         {"config", config.body},
                         {"result", e.artifacts.result},
                         {"assertions", assertions_json(e.artifacts.assertions)},
                         {"passed", e.result.passed()}};
  return e;
}

}  // namespace

bool RunResult::passed() const {
  for (const auto& a : assertions) {
    if (!a.passed) return false;
  }
  return true;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::Io, "SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

RunResult evaluate(const ExperimentConfig& config) { return evaluate_full(config).result; }

RunResult run_experiment(const ExperimentConfig& config) {
  const std::string started = utc_now();
  Evaluated e = evaluate_full(config);
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create '" + config.out_dir.string() + "': " + ec.message());

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("report.json", e.result.report.dump(2) + "\n");
  if (e.artifacts.curve_csv) files.emplace_back("curve.csv", *e.artifacts.curve_csv);
  if (e.artifacts.plot_csv) files.emplace_back("plot.csv", *e.artifacts.plot_csv);

  RunManifest& m = e.result.manifest;
  m.config_sha256 = sha256_hex(config.body.dump());
  m.version = PACNFL_VERSION;
  m.started_at = started;
  for (const auto& [name, bytes] : files) {
    write_file(config.out_dir / name, bytes);
    m.outputs.push_back(OutputDigest{name, sha256_hex(bytes), bytes.size()});
  }
  m.finished_at = utc_now();

  json outputs = json::array();
  for (const auto& o : m.outputs) outputs.push_back(json{{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  const json manifest{{"command", std::string(subcommand_name(config.command))},
                      {"config_sha256", m.config_sha256},
                      {"version", m.version},
                      {"jobs", config.jobs},
                      {"started_at", m.started_at},
                      {"finished_at", m.finished_at},
                      {"passed", e.result.passed()},
                      {"outputs", std::move(outputs)}};
  write_file(config.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return std::move(e.result);
}

}  // namespace pacnfl
