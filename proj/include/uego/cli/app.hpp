// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uego::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

/// Environment variable naming the default dataset root.
inline constexpr const char* kDataRootEnv = "UEGO_DATA_ROOT";

/// Parses and runs one subcommand (gen, train, eval, stats, ablate).
/// Results go to `out`, progress and diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uego::cli
