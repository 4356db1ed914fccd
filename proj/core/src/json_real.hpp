#pragma once

#include <charconv>

#include <json.hpp>

namespace collab::detail {

// Goes through the shortest float spelling so the dumped double carries no
// more digits than the float needs.
inline nlohmann::json json_real(float v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  double d = 0.0;
  std::from_chars(buf, res.ptr, d);
  return d;
}

}  // namespace collab::detail
