#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "maxent/pmf.hpp"

namespace maxent {

// Pmf text format: one probability per line, the support index is the line's
// position among non-comment lines. Everything after '#' is ignored, as are
// blank lines. Values are written with 17 significant digits so that
// read(write(p)) == p bit for bit.

/// Format a double with 17 significant digits (shortest exact round trip form).
std::string format_exact(double value);

void write_pmf(std::ostream& out, const Pmf& p, std::string_view comment = {});
Pmf read_pmf(std::istream& in);

/// Throws IoError when the file cannot be opened or written.
void write_pmf_file(const std::filesystem::path& path, const Pmf& p, std::string_view comment = {});
Pmf read_pmf_file(const std::filesystem::path& path);

}  // namespace maxent
