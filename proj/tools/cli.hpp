// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace progedit::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 a check inside the command failed, 2 bad input.
enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kInputError = 2 };

// Entry point shared by the progedit binary and in-process tests. args
// excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace progedit::cli
