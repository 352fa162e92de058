#pragma once

#include <charconv>
#include <string>

namespace tssnet::detail {

// Shortest decimal form that parses back to the same double. Used for every
// number the toolkit writes, so identical runs produce identical files.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace tssnet::detail
