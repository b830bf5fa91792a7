// Command-line driver: parses one invocation and writes all output to the
// supplied streams, returning the process exit code.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onewayqc_cli {

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace onewayqc_cli
