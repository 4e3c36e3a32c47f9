#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sshl::cli {

/// Exit statuses: 0 success, 1 usage error, 2 data or model error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sshl::cli
