#include "pacnfl/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "pacnfl/error.hpp"
#include "pacnfl/task_loss.hpp"

namespace pacnfl {

namespace {

constexpr std::uint64_t kTargetTag = 0x7461726765747321ULL;

struct TargetRun {
  Rational loss_sum = 0;
  std::uint64_t failures = 0;
};

struct Item {
  std::size_t target;
  std::uint64_t begin, end;
};

// Runs `trials` seeded trials per target; targets and trial chunks are
// spread over the workers, and per-item results are reduced in item order.
std::vector<TargetRun> run_trials(const std::vector<BigInt>& ordinals, const std::vector<Target>& targets,
                                  const std::vector<std::optional<Rational>>& thresholds, const Learner& learner,
                                  const TaskLoss& loss, std::uint64_t m, std::uint64_t trials, const RngStream& rng,
                                  unsigned jobs) {
  jobs = std::max(1u, jobs);
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(trials, (jobs + targets.size() - 1) / targets.size()));
  std::vector<Item> items;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::uint64_t c = 0; c < chunks; ++c) items.push_back(Item{i, trials * c / chunks, trials * (c + 1) / chunks});
  }
  std::vector<TargetRun> results(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < items.size(); k = next++) {
      try {
        const Item& it = items[k];
        const RngStream base = rng.derive(to_u64(ordinals[it.target]));
        TargetRun r;
        for (std::uint64_t t = it.begin; t < it.end; ++t) {
          const RngStream stream = base.at(t);
          AnySample s;
          if (const auto* p = std::get_if<SparseDist>(&targets[it.target])) {
            s = draw(*p, m, stream);
          } else {
            s = draw(std::get<RealTarget>(targets[it.target]), m, stream);
          }
          const Rational v = loss(learner(s), targets[it.target]);
          if (thresholds[it.target] && v > *thresholds[it.target]) ++r.failures;
          r.loss_sum += v;
        }
        results[k] = std::move(r);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(jobs, items.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<TargetRun> out(targets.size());
  for (std::size_t k = 0; k < items.size(); ++k) {
    out[items[k].target].loss_sum += results[k].loss_sum;
    out[items[k].target].failures += results[k].failures;
  }
  return out;
}

std::vector<BigInt> all_ordinals(const ClassHandle& cls, std::uint64_t budget) {
  const BigInt n = cls.size();
  if (n > from_u64_big(budget)) {
    throw Error(Errc::ClassTooLarge, "class has " + to_string(n) + " members, budget " + std::to_string(budget));
  }
  std::vector<BigInt> out;
  for (std::uint64_t i = 0; i < to_u64(n); ++i) out.push_back(from_u64_big(i));
  return out;
}

std::uint64_t bounded(std::mt19937_64& eng, std::uint64_t range) {
  // uniform on [0, range) by rejection
  const unsigned __int128 span = static_cast<unsigned __int128>(1) << 64;
  const unsigned __int128 limit = span - span % range;
  for (;;) {
    const std::uint64_t u = eng();
    if (u < limit) return u % range;
  }
}

BigInt bounded_big(std::mt19937_64& eng, const BigInt& range) {
  // rejection on the smallest power of two covering range
  const std::size_t bits = mpz_sizeinbase(range.get_mpz_t(), 2);
  for (;;) {
    BigInt u = 0;
    for (std::size_t have = 0; have < bits; have += 64) {
      u <<= 64;
      u += from_u64_big(eng());
    }
    u >>= static_cast<mp_bitcnt_t>((bits + 63) / 64 * 64 - bits);
    if (u < range) return u;
  }
}

}  // namespace

RiskEstimate mc_risk(const ClassHandle& cls, const Learner& learner, std::uint64_t m, std::uint64_t trials,
                     const RngStream& rng, const McOptions& opt) {
  if (trials == 0) throw Error(Errc::EmptyEstimate, "Monte Carlo estimate with zero trials");
  if (learner.task() != cls.task()) throw Error(Errc::MixedTasks, "learner and class target different tasks");
  const std::vector<BigInt> ordinals = opt.targets.empty() ? all_ordinals(cls, opt.budget) : opt.targets;
  std::vector<Target> targets;
  for (const auto& o : ordinals) targets.push_back(target_of(cls, o));
  const std::vector<std::optional<Rational>> thresholds(targets.size(), opt.threshold);
  const auto runs =
      run_trials(ordinals, targets, thresholds, learner, TaskLoss::for_class(cls), m, trials, rng, opt.jobs);

  RiskEstimate est;
  est.m = m;
  est.trials = trials;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    MemberRisk r;
    r.ordinal = ordinals[i];
    r.trials = trials;
    r.loss_sum = runs[i].loss_sum;
    r.mean = to_double(runs[i].loss_sum / from_u64(trials));
    r.mean_ci = clopper_pearson(to_double(runs[i].loss_sum), trials, opt.confidence);
    r.failures = runs[i].failures;
    r.failure_ci = clopper_pearson(r.failures, trials, opt.confidence);
    est.average += r.mean;
    est.max = std::max(est.max, r.mean);
    est.members.push_back(std::move(r));
  }
  est.average /= static_cast<double>(runs.size());
  return est;
}

std::vector<BigInt> choose_targets(const BigInt& n, std::uint64_t k, const RngStream& rng) {
  std::vector<BigInt> out;
  if (!fits_u64(n)) {
    auto eng = rng.engine();
    std::set<BigInt> chosen;
    while (chosen.size() < k) chosen.insert(bounded_big(eng, n));
    return {chosen.begin(), chosen.end()};
  }
  const std::uint64_t size = to_u64(n);
  if (k >= size) {
    for (std::uint64_t i = 0; i < size; ++i) out.push_back(from_u64_big(i));
    return out;
  }
  // Floyd's sampling
  auto eng = rng.engine();
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = size - k; j < size; ++j) {
    const std::uint64_t t = bounded(eng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  for (auto v : chosen) out.push_back(from_u64_big(v));
  return out;
}

CurvePoint estimate_m(const ClassHandle& cls, const Learner& learner, const EstimateProtocol& p,
                      const RngStream& rng) {
  if (sgn(p.eps) <= 0) throw Error(Errc::BadRange, "eps must be > 0");
  if (sgn(p.delta) <= 0 || p.delta >= 1) throw Error(Errc::BadRange, "delta must lie in (0,1)");
  if (p.trials == 0) throw Error(Errc::EmptyEstimate, "estimate_m with zero trials");
  if (p.m_min == 0 || p.m_max < p.m_min) throw Error(Errc::BadRange, "need 1 <= m_min <= m_max");
  if (learner.task() != cls.task()) throw Error(Errc::MixedTasks, "learner and class target different tasks");

  CurvePoint cp;
  cp.eps = p.eps;
  cp.delta = p.delta;
  cp.trials = p.trials;
  if (!p.targets.empty()) {
    cp.targets = p.targets;
  } else if (cls.size() <= from_u64_big(p.max_targets)) {
    cp.targets = all_ordinals(cls, p.budget);
  } else {
    cp.targets = choose_targets(cls.size(), p.max_targets, rng.derive(kTargetTag));
  }

  const double delta = to_double(p.delta);
  if (clopper_pearson(std::uint64_t{0}, p.trials, p.confidence).hi > delta) {
    throw Error(Errc::SearchBoundExceeded, "delta " + to_string(p.delta) + " cannot be certified with " +
                                               std::to_string(p.trials) + " trials even without failures");
  }

  std::vector<Target> targets;
  std::vector<std::optional<Rational>> thresholds;
  for (const auto& o : cp.targets) {
    targets.push_back(target_of(cls, o));
    Rational opt = 0;
    if (p.benchmark) opt = opt_loss(*p.benchmark, targets.back(), p.budget).value;
    thresholds.emplace_back(learner.alpha() * opt + p.eps);
  }
  const TaskLoss loss = TaskLoss::for_class(cls);

  auto probe = [&](std::uint64_t m) {
    const auto runs = run_trials(cp.targets, targets, thresholds, learner, loss, m, p.trials, rng, p.jobs);
    GridProbe g;
    g.m = m;
    g.pass = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const double ucb = clopper_pearson(runs[i].failures, p.trials, p.confidence).hi;
      if (i == 0 || runs[i].failures > g.failures) {
        g.failures = runs[i].failures;
        g.ucb = ucb;
        g.worst_target = cp.targets[i];
      }
      if (ucb > delta) g.pass = false;
    }
    cp.probes.push_back(g);
    return g.pass;
  };

  std::uint64_t lo = 0, hi = p.m_min;
  while (!probe(hi)) {
    lo = hi;
    if (hi == p.m_max) {
      throw Error(Errc::SearchBoundExceeded, "no certified m in [" + std::to_string(p.m_min) + ", " +
                                                 std::to_string(p.m_max) + "]; last failing m = " + std::to_string(lo));
    }
    hi = std::min(p.m_max, 2 * hi);
  }
  while (lo != 0 && hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  cp.m_hat = hi;
  cp.bracket_lo = lo;
  for (const auto& g : cp.probes) {
    if (g.m == hi && g.pass) {
      cp.failures = g.failures;
      cp.ucb = g.ucb;
      cp.worst_target = g.worst_target;
    }
  }
  return cp;
}

}  // namespace pacnfl
