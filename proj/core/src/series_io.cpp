#include "ginar/series_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ginar {

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_line(size_t lineno, const std::string& why) {
  std::ostringstream os;
  os << "series: line " << lineno << ": " << why;
  throw std::invalid_argument(os.str());
}

int parse_count(const std::string& field, size_t lineno) {
  if (field.empty()) bad_line(lineno, "empty value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (errno != 0 || end == field.c_str() || *end != '\0')
    bad_line(lineno, "not a number: '" + field + "'");
  if (v < 0) bad_line(lineno, "negative count");
  const double r = std::nearbyint(v);
  if (v != r) bad_line(lineno, "count is not an integer");
  if (r > 2147483647.0) bad_line(lineno, "count too large");
  return static_cast<int>(r);
}

}  // namespace

std::vector<int> read_series(std::istream& in) {
  std::vector<int> x;
  std::string line;
  size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    std::string last = s;
    if (const auto comma = s.find_last_of(','); comma != std::string::npos)
      last = strip(s.substr(comma + 1));
    if (first_content) {
      first_content = false;
      // Allow one header line (non-numeric last column).
      char* end = nullptr;
      std::strtod(last.c_str(), &end);
      if (end == last.c_str() || *end != '\0') continue;
    }
    x.push_back(parse_count(last, lineno));
  }
  if (x.empty()) throw std::invalid_argument("series: no observations found");
  return x;
}

std::vector<int> read_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("series: cannot open '" + path + "'");
  return read_series(in);
}

void write_series(std::ostream& out, std::span<const int> x, bool header) {
  if (header) out << "count\n";
  for (int v : x) out << v << "\n";
}

void write_series_file(const std::string& path, std::span<const int> x, bool header) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("series: cannot open '" + path + "' for writing");
  write_series(out, x, header);
}

}  // namespace ginar
