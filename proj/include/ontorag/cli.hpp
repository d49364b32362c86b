#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ontorag::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kProviderError = 3 };

// Runs one subcommand (align, subsume, dict, infiltrate, ingest, ask, chat,
// eval). `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ontorag::cli
