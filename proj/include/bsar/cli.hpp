#pragma once

// Command-line frontend. Subcommands: simulate, backproject, normal,
// predict, geometry, validate, replay.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical
// validation failure, 4 I/O error.

#include <iosfwd>
#include <string>
#include <vector>

#include "bsar/validation.hpp"

namespace bsar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitIo = 4;

struct CliContext {
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  ValidationHooks hooks;
};

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, const CliContext& ctx);

/// Path of the manifest written next to an output file.
std::string manifest_path(const std::string& output);

}  // namespace bsar
