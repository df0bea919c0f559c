#pragma once

namespace tjlc {

/// Command-line entry point (subcommands: mask, synth, complete, evaluate,
/// info). Exit codes: 0 success, 1 usage error, 2 data error,
/// 3 non-convergence within the iteration cap (result still written).
int cli_main(int argc, const char* const* argv);

}  // namespace tjlc
