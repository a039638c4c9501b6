#pragma once

#include <string>
#include <vector>

namespace persuasion {

/// Command-line entry point (gen-random, gen-vc, deviation, solve, verify,
/// eval-markov, simulate, separation). Returns the process exit status:
/// 0 success, 1 verification failure, 2 usage or parse errors.
int cli_main(const std::vector<std::string>& args);
int cli_main(int argc, char** argv);

}  // namespace persuasion
