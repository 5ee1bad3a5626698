#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppcdstab {

enum class ErrorCode {
  DivisionByZero,
  NoUniqueSolution,
  DimensionMismatch,
  InvalidArgument,
  Parse,
  UnknownState,
  NotAPath,
  NotIrreducible,
  NotAperiodic,
  InfiniteEdgePresent,
  InfiniteEdgeOnPath,
  InvalidChain,
  DegenerateSystem,
  EntryNotAFacet,
  InvalidModel,
  StuckTrajectory,
  HitNonGuardFacet,
  EmptySwitchAtGuard,
  StartNotOnFacet,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ppcdstab
