#pragma once

namespace warplab {

/// Entry point shared by the warplab binary and the test drivers.
/// Exit codes: 0 success, 1 invalid input, 2 numerical failure (with a
/// diagnostic JSON object on standard error).
int run(int argc, const char* const* argv);

}  // namespace warplab
