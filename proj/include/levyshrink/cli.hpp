#pragma once

#include <string>
#include <vector>

namespace levyshrink::cli {

/// Run one command line.  Returns 0 on success (and for --help), 2 for
/// unknown flags or invalid values, 1 when the library rejects the request.
int dispatch(int argc, const char* const* argv);

/// Same, with the program name omitted.
int dispatch(const std::vector<std::string>& args);

/// Parse `lo:hi:step` into an inclusive grid (endpoint kept within 1e-12).
std::vector<double> parse_grid(const std::string& text);

}  // namespace levyshrink::cli
