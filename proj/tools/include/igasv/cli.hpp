#pragma once

// The igasv command line, callable in-process.
//
// Exit codes: 0 success, 1 bad input (or a contract the curves do not cover),
// 2 calibration finished without converging.

#include <iosfwd>
#include <string>
#include <vector>

namespace igasv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace igasv::cli
