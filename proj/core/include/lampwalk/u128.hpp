#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

#include "lampwalk/errors.hpp"

namespace lampwalk {

// 128-bit unsigned integers hold heavy-tail draw values: the draw law has
// P(value > 2^64) ~ 1.3e-5 per draw, so a 64-bit carrier would saturate many
// times per million draws and saturation ties would corrupt record detection.
// With 128 bits the saturation probability is ~3e-10 per draw.
using u128 = unsigned __int128;

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Strict decimal parse; throws ConfigError on malformed input or overflow.
inline u128 u128_from_string(std::string_view s) {
  if (s.empty()) throw ConfigError("empty 128-bit integer literal");
  u128 v = 0;
  constexpr u128 kMax = ~u128{0};
  for (const char ch : s) {
    if (ch < '0' || ch > '9') {
      throw ConfigError("malformed 128-bit integer literal: " +
                        std::string(s));
    }
    const u128 digit = static_cast<u128>(ch - '0');
    if (v > (kMax - digit) / 10) {
      throw ConfigError("128-bit integer literal overflows: " +
                        std::string(s));
    }
    v = v * 10 + digit;
  }
  return v;
}

inline double u128_to_double(u128 v) { return static_cast<double>(v); }

}  // namespace lampwalk
