#include "fsco/serialize.hpp"

#include <cstdio>
#include <cstdlib>

#include "fsco/errors.hpp"

namespace fsco {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s.empty()) throw ArgumentError("empty numeric value");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw ArgumentError("unparsable numeric value '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s) {
  if (s.empty()) throw ArgumentError("empty integer value");
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) {
    throw ArgumentError("unparsable integer value '" + s + "'");
  }
  return v;
}

}  // namespace fsco
