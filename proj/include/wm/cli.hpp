#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wm {

/* Runs the command line tool. args excludes the program name. Returns 0 on
 * success, 1 on model or runtime errors, 2 on usage errors; all regular
 * output goes to out as key=value lines, errors to err as one line. */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wm
