#ifndef MMW_FORMAT_HPP
#define MMW_FORMAT_HPP

#include <cstdio>
#include <string>

namespace mmw {

/// Fixed decimal formatting so identical values always serialize to
/// identical bytes.  17 significant digits round-trip a double exactly.
inline std::string fmt_double(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

}  // namespace mmw

#endif  // MMW_FORMAT_HPP
