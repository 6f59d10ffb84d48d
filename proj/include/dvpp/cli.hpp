#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dvpp {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitNumeric = 2,
    kExitIo = 3,
};

// Environment variable consulted for the default output directory of `run`.
inline constexpr const char* kOutputDirEnv = "DVPPSIM_OUT_DIR";

// Entry point of the dvppsim command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dvpp
