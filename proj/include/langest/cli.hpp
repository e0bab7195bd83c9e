#pragma once

#include <iosfwd>

namespace langest {

/// Entry point of the `langest` command line tool. Returns the process exit
/// code: 0 success, 2 usage error or unusable input, 3 numerical or
/// simulation failure, 4 mean square outside the range of psi.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace langest
