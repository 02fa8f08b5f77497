#ifndef GINAR_SERIES_IO_HPP
#define GINAR_SERIES_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ginar {

/// Reads a count series from CSV text: one observation per line, either a
/// bare count or `time,count` (the last column wins).  A single leading
/// non-numeric header line is skipped.  Negative, fractional, missing or
/// non-numeric entries raise std::invalid_argument with the line number.
std::vector<int> read_series(std::istream& in);
std::vector<int> read_series_file(const std::string& path);

void write_series(std::ostream& out, std::span<const int> x, bool header = true);
void write_series_file(const std::string& path, std::span<const int> x, bool header = true);

}  // namespace ginar

#endif
