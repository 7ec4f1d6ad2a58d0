///
/// \file cli.hpp
///
/// In-process entry point of the command line tool, so the verbs can be
/// driven from tests without spawning processes.
///
#ifndef EXPDENS_CLI_HPP
#define EXPDENS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace expdens::cli {

/// Exit codes: 0 ok, 1 compute failure, 2 usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

int run_main(int argc, char** argv);

} // namespace expdens::cli

#endif
