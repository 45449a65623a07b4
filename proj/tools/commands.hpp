#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace nasolv::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitConvergence = 3,
    kExitUsage = 64,
    kExitConfig = 78,
};

// Parses argv, runs one command and maps failures to exit codes.
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args);

GPoint parse_point(const GroupModel& m, const std::string& s);

}  // namespace nasolv::cli
