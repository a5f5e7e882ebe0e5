#ifndef FSCO_SERIALIZE_HPP
#define FSCO_SERIALIZE_HPP

#include <string>

namespace fsco {

/// Shortest text form that round-trips a 64-bit float exactly
/// (17 significant digits).
std::string format_double(double v);

/// strtod over the full string; throws ArgumentError on trailing garbage.
double parse_double(const std::string& s);

long long parse_int(const std::string& s);

}  // namespace fsco

#endif  // FSCO_SERIALIZE_HPP
