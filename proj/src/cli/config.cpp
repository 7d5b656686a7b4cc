#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pacnfl/runner.hpp"

namespace pacnfl {

namespace {

constexpr std::pair<Subcommand, std::string_view> kNames[] = {
    {Subcommand::Construct, "construct"},        {Subcommand::Learn, "learn"},
    {Subcommand::SampleComplexity, "sample-complexity"}, {Subcommand::NflExact, "nfl-exact"},
    {Subcommand::NflMc, "nfl-mc"},               {Subcommand::Dominate, "dominate"},
    {Subcommand::Synthesize, "synthesize"},
};

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(Errc::ConfigError, path + ": " + what);
}

std::uint64_t positive(const json& body, const char* key, std::uint64_t fallback) {
  auto it = body.find(key);
  if (it == body.end()) return fallback;
  const std::uint64_t v = u64_from_json(*it, key);
  if (v == 0) bad(key, "must be positive");
  return v;
}

}  // namespace

std::string_view subcommand_name(Subcommand c) {
  for (const auto& [k, n] : kNames) {
    if (k == c) return n;
  }
  return "?";
}

std::optional<Subcommand> parse_subcommand(std::string_view text) {
  for (const auto& [k, n] : kNames) {
    if (n == text) return k;
  }
  return std::nullopt;
}

const std::vector<std::string_view>& subcommand_names() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> v;
    for (const auto& [k, n] : kNames) v.push_back(n);
    return v;
  }();
  return names;
}

ExperimentConfig parse_config(Subcommand command, const json& body, const std::filesystem::path& base_dir,
                              const Overrides& overrides) {
  if (!body.is_object()) bad("<root>", "expected an object");
  ExperimentConfig c;
  c.command = command;
  c.body = body;
  c.base_dir = base_dir;

  if (auto it = body.find("command"); it != body.end()) {
    if (!it->is_string() || it->get<std::string>() != subcommand_name(command)) {
      bad("command", "config is for '" + it->dump() + "', invoked as '" + std::string(subcommand_name(command)) + "'");
    }
  }

  if (overrides.seed) {
    c.seed = *overrides.seed;
  } else {
    auto it = body.find("seed");
    if (it == body.end()) bad("seed", "missing");
    c.seed = u64_from_json(*it, "seed");
  }
  c.body["seed"] = c.seed;

  c.budget = positive(body, "budget", kDefaultBudget);
  c.exact_budget = positive(body, "exact_budget", kEnumerationBudget);
  c.jobs = static_cast<unsigned>(positive(body, "jobs", 1));
  if (overrides.jobs) {
    if (*overrides.jobs == 0) bad("jobs", "must be positive");
    c.jobs = *overrides.jobs;
  }

  if (overrides.out) {
    c.out_dir = *overrides.out;
  } else if (const char* env = std::getenv("PACNFL_OUT_DIR"); env && *env) {
    c.out_dir = env;
  } else if (auto it = body.find("out"); it != body.end()) {
    if (!it->is_string()) bad("out", "expected a string");
    c.out_dir = base_dir / it->get<std::string>();
  } else {
    c.out_dir = "out";
  }
  return c;
}

ExperimentConfig load_config(Subcommand command, const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("--config", "cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  json body;
  try {
    body = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    bad(path.string(), e.what());
  }
  return parse_config(command, body, path.parent_path(), overrides);
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ConfigError:
      return kExitConfig;
    case Errc::ClassTooLarge:
    case Errc::EnumerationBudgetExceeded:
    case Errc::SearchBoundExceeded:
      return kExitBudget;
    default:
      return kExitOther;
  }
}

std::string_view module_of(Errc code) {
  switch (code) {
    case Errc::EmptySupport:
    case Errc::BadWeights:
    case Errc::InvalidDistribution:
    case Errc::EmptySample:
      return "core-dist";
    case Errc::BadEta:
    case Errc::BadN:
    case Errc::NonVanishing:
    case Errc::EtaAboveGmax:
    case Errc::OutOfTable:
      return "constructions";
    case Errc::EmptyClass:
    case Errc::ClassTooLarge:
    case Errc::MixedTasks:
    case Errc::SampleTooSmall:
      return "learners";
    case Errc::BadPrecondition:
    case Errc::EnumerationBudgetExceeded:
    case Errc::BadRange:
    case Errc::EmptyEstimate:
    case Errc::SearchBoundExceeded:
      return "nfl-harness";
    case Errc::LengthMismatch:
    case Errc::EmptyList:
      return "dominance";
    case Errc::ConfigError:
    case Errc::Io:
      return "cli";
  }
  return "?";
}

}  // namespace pacnfl
