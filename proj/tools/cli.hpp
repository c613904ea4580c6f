#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clonelab::cli
{

/// Exit codes of the command-line tool.
enum ExitCode : int
{
  kTrue = 0,
  kFalse = 1,
  kInputError = 2,
  kCapacityError = 3,
  kLogicError = 4,
  kInternalError = 5
};

/// Runs one command; args[0] is the program name.
int run( std::vector<std::string> const& args, std::istream& in, std::ostream& out, std::ostream& err );

} // namespace clonelab::cli
