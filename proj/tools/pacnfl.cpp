#include <CLI11.hpp>

#include <iostream>

#include "pacnfl/runner.hpp"

int main(int argc, char** argv) {
  using namespace pacnfl;
  CLI::App app{"pacnfl: constructions, learners and no-free-lunch oracles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<std::pair<Subcommand, CLI::App*>> subs;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  for (auto name : subcommand_names()) {
    auto* sub = app.add_subcommand(std::string(name), "run the " + std::string(name) + " experiment");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    auto* o = sub->add_option("--out", out_dir, "output directory");
    auto* s = sub->add_option("--seed", seed, "master seed override");
    auto* j = sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    // Options are shared state; any subcommand's flag fills the same variable.
    out_opt = out_opt ? out_opt : o;
    seed_opt = seed_opt ? seed_opt : s;
    jobs_opt = jobs_opt ? jobs_opt : j;
    subs.emplace_back(*parse_subcommand(name), sub);
  }
  CLI11_PARSE(app, argc, argv);

  Subcommand command = Subcommand::Construct;
  CLI::App* active = nullptr;
  for (auto& [c, sub] : subs) {
    if (sub->parsed()) {
      command = c;
      active = sub;
    }
  }
  Overrides ov;
  if (active->count("--out")) ov.out = out_dir;
  if (active->count("--seed")) ov.seed = seed;
  if (active->count("--jobs")) ov.jobs = jobs;

  try {
    const ExperimentConfig cfg = load_config(command, config_path, ov);
    const RunResult r = run_experiment(cfg);
    for (const auto& a : r.assertions) {
      std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << "\n";
    }
    std::cout << "wrote " << cfg.out_dir.string() << "/report.json\n";
    return r.passed() ? kExitOk : kExitAssertion;
  } catch (const Error& e) {
    std::cerr << "error [" << module_of(e.code()) << "/" << errc_name(e.code()) << "] " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
