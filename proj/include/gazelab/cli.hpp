#pragma once

namespace gazelab::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitValidation = 2,
};

/// Entry point of the `gazelab` binary: analyze, synth and serve
/// subcommands. The log level comes from GAZELAB_LOG_LEVEL.
int run(int argc, char** argv);

}  // namespace gazelab::cli
