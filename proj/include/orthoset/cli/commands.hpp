#pragma once

#include "orthoset/matkernel.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace orthoset::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kAffirmative = 0, kNegative = 1, kUsage = 2 };

/// Environment variable that overrides the default eps_orth.
inline constexpr const char* kToleranceEnv = "ORTHOSET_TOL";

/// Default tolerance with eps_orth taken from `env_value` when present.
/// Throws std::invalid_argument on an unparsable or inconsistent value.
Tolerance tolerance_from(const std::optional<std::string>& env_value);

/// Entry point behind the `orthoset` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orthoset::cli
