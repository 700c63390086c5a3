/**
 * @file cli.hpp
 * @brief Command-line dispatcher for the `tap` tool.
 */
#pragma once

namespace tap::cli {

/// Runs one CLI invocation. Exit status: 0 on success, 1 when a
/// metamorphic campaign found violations, 2 on usage or input errors.
int dispatch(int argc, const char* const* argv);

}  // namespace tap::cli
