#pragma once

namespace tsketch {

/// Entry point behind the tsketch binary. Exit codes: 0 success, 2 usage,
/// 3 data (malformed files, invalid specs), 4 numerical.
int run_cli(int argc, const char* const* argv);

}  // namespace tsketch
