#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pacnfl/error.hpp"
#include "pacnfl/json_io.hpp"

namespace pacnfl {

enum class Subcommand { Construct, Learn, SampleComplexity, NflExact, NflMc, Dominate, Synthesize };

std::string_view subcommand_name(Subcommand c);
std::optional<Subcommand> parse_subcommand(std::string_view text);
const std::vector<std::string_view>& subcommand_names();

struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
};

struct ExperimentConfig {
  Subcommand command = Subcommand::Construct;
  /// Config body with overrides applied; subcommand sections are read from it.
  json body;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t exact_budget = kEnumerationBudget;
  unsigned jobs = 1;
  std::filesystem::path out_dir;
  /// Directory relative file references resolve against.
  std::filesystem::path base_dir;
};

/// Validates the common fields. The output directory is, in order: the
/// override, $PACNFL_OUT_DIR, the config's "out", then "out".
ExperimentConfig parse_config(Subcommand command, const json& body, const std::filesystem::path& base_dir,
                              const Overrides& overrides = {});
ExperimentConfig load_config(Subcommand command, const std::filesystem::path& path, const Overrides& overrides = {});

struct OutputDigest {
  std::string file;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string config_sha256;
  std::string version;
  std::string started_at;
  std::string finished_at;
  std::vector<OutputDigest> outputs;
};

struct AssertionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  json report;
  std::vector<AssertionResult> assertions;
  RunManifest manifest;
  bool passed() const;
};

/// Runs the subcommand and writes report.json, curve.csv / plot.csv where
/// applicable, and manifest.json into the output directory.
RunResult run_experiment(const ExperimentConfig& config);

/// Report body only, without touching the file system.
RunResult evaluate(const ExperimentConfig& config);

std::string sha256_hex(std::string_view bytes);

/// 2 config error, 3 budget exceeded, 1 otherwise.
int exit_code_for(Errc code);
/// Module an error class comes from, for messages.
std::string_view module_of(Errc code);

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitAssertion = 4;

}  // namespace pacnfl
