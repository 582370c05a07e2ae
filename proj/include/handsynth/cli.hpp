#pragma once

namespace handsynth {

// Full command-line entry point (subcommands: generate, augment, perturb,
// audit, evaluate, preview). Exposed so tests can drive the binary's exact
// behavior in-process. Returns the process exit code: 0 success, 1 usage,
// 2 schema/validation, 3 IO, 4 internal.
int cli_main(int argc, const char* const* argv);

}  // namespace handsynth
