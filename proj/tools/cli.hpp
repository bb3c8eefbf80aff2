// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_TOOLS_CLI_HPP
#define MNEPV_TOOLS_CLI_HPP

#include <iosfwd>

namespace mnepv::cli {

/// Exit codes: 0 converged (or help), 1 input error, 2 no convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNotConverged = 2;

/// Runs the command line; human-readable output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mnepv::cli

#endif  // MNEPV_TOOLS_CLI_HPP
