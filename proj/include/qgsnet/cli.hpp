#pragma once

namespace qgsnet::cli {

/// Entry point behind the qgsnet binary. Exit codes: 0 success, 2 usage
/// error, 1 runtime failure.
int run(int argc, const char* const* argv);

}  // namespace qgsnet::cli
