#include "lampwalk/element.hpp"

#include <algorithm>
#include <cstdlib>

#include "lampwalk/digest.hpp"
#include "lampwalk/errors.hpp"

namespace lampwalk {

GroupElement identity(int rank) {
  GroupElement e;
  e.base.assign(static_cast<std::size_t>(rank), 0);
  return e;
}

bool is_canonical(const GroupElement& a) {
  if (a.base.empty()) return false;
  for (std::size_t i = 1; i < a.lamps.size(); ++i) {
    if (a.lamps[i - 1] >= a.lamps[i]) return false;
  }
  return true;
}

bool is_identity(const GroupElement& a) {
  if (!a.lamps.empty()) return false;
  return std::all_of(a.base.begin(), a.base.end(),
                     [](std::int64_t c) { return c == 0; });
}

GroupElement mul(const GroupElement& a, const GroupElement& b) {
  if (a.base.size() != b.base.size()) {
    throw ConfigError("group product of elements with different base ranks");
  }
  GroupElement r;
  r.base.resize(a.base.size());
  for (std::size_t i = 0; i < a.base.size(); ++i) {
    r.base[i] = a.base[i] + b.base[i];
  }
  const std::int64_t s = a.base.back();
  // Symmetric difference of the two sorted lamp lists, the right one
  // translated by the left factor's lamplighter position.
  r.lamps.reserve(a.lamps.size() + b.lamps.size());
  std::size_t i = 0, j = 0;
  while (i < a.lamps.size() && j < b.lamps.size()) {
    const std::int64_t x = a.lamps[i];
    const std::int64_t y = b.lamps[j] + s;
    if (x < y) {
      r.lamps.push_back(x);
      ++i;
    } else if (y < x) {
      r.lamps.push_back(y);
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  for (; i < a.lamps.size(); ++i) r.lamps.push_back(a.lamps[i]);
  for (; j < b.lamps.size(); ++j) r.lamps.push_back(b.lamps[j] + s);
  return r;
}

GroupElement inv(const GroupElement& a) {
  GroupElement r;
  r.base.resize(a.base.size());
  for (std::size_t i = 0; i < a.base.size(); ++i) r.base[i] = -a.base[i];
  const std::int64_t s = -a.base.back();
  r.lamps.resize(a.lamps.size());
  for (std::size_t i = 0; i < a.lamps.size(); ++i) {
    r.lamps[i] = a.lamps[i] + s;
  }
  return r;
}

std::string format_element(const GroupElement& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.base.size(); ++i) {
    out += std::to_string(a.base[i]);
    out += ',';
  }
  out += '[';
  for (std::size_t i = 0; i < a.lamps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(a.lamps[i]);
  }
  out += "])";
  return out;
}

namespace {

std::int64_t parse_i64(std::string_view s, std::string_view whole) {
  if (s.empty()) {
    throw ConfigError("malformed group element: empty integer in '" +
                      std::string(whole) + "'");
  }
  errno = 0;
  char* end = nullptr;
  const std::string tmp(s);
  const long long v = std::strtoll(tmp.c_str(), &end, 10);
  if (errno != 0 || end != tmp.c_str() + tmp.size()) {
    throw ConfigError("malformed group element: bad integer '" + tmp +
                      "' in '" + std::string(whole) + "'");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

GroupElement parse_element(std::string_view s, int expected_rank) {
  const std::string_view whole = s;
  auto fail = [&](const char* why) -> GroupElement {
    throw ConfigError(std::string("malformed group element: ") + why +
                      " in '" + std::string(whole) + "'");
  };
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') {
    return fail("missing parentheses");
  }
  s = s.substr(1, s.size() - 2);
  const std::size_t lb = s.find('[');
  if (lb == std::string_view::npos || s.back() != ']') {
    return fail("missing lamp bracket");
  }
  GroupElement r;
  // Base coordinates: comma-terminated integers before the bracket.
  std::string_view head = s.substr(0, lb);
  while (!head.empty()) {
    const std::size_t comma = head.find(',');
    if (comma == std::string_view::npos) return fail("unterminated base part");
    r.base.push_back(parse_i64(head.substr(0, comma), whole));
    head = head.substr(comma + 1);
  }
  if (r.base.empty()) return fail("no base coordinates");
  std::string_view lampsv = s.substr(lb + 1, s.size() - lb - 2);
  while (!lampsv.empty()) {
    const std::size_t comma = lampsv.find(',');
    const std::string_view tok = comma == std::string_view::npos
                                     ? lampsv
                                     : lampsv.substr(0, comma);
    r.lamps.push_back(parse_i64(tok, whole));
    lampsv = comma == std::string_view::npos ? std::string_view{}
                                             : lampsv.substr(comma + 1);
  }
  if (expected_rank >= 0 &&
      r.base.size() != static_cast<std::size_t>(expected_rank)) {
    return fail("unexpected base rank");
  }
  if (!is_canonical(r)) return fail("lamps not strictly increasing");
  return r;
}

std::uint64_t element_digest(const GroupElement& a) {
  Fnv1a f;
  f.update_u64(a.base.size());
  for (std::int64_t c : a.base) f.update_i64(c);
  f.update_u64(a.lamps.size());
  for (std::int64_t l : a.lamps) f.update_i64(l);
  return f.value();
}

}  // namespace lampwalk
