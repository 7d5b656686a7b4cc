#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pacnfl {

enum class Errc {
  EmptySupport,
  BadWeights,
  InvalidDistribution,
  EmptySample,
  BadEta,
  BadN,
  NonVanishing,
  EtaAboveGmax,
  OutOfTable,
  EmptyClass,
  ClassTooLarge,
  MixedTasks,
  SampleTooSmall,
  BadPrecondition,
  EnumerationBudgetExceeded,
  BadRange,
  EmptyEstimate,
  SearchBoundExceeded,
  LengthMismatch,
  EmptyList,
  ConfigError,
  Io,
};

std::string_view errc_name(Errc code);

/// Library-wide exception. The code identifies the failure class; the
/// message carries the context (field path, offending value, bracket, ...).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pacnfl
