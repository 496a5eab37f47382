#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dgres {

// Exact rational scalars. GMP keeps mpq_class canonical under arithmetic;
// we only have to canonicalize values we assemble from raw parts.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Parses "n" or "n/d" with optional leading '-'. Returns nullopt on junk.
inline std::optional<Rat> rat_parse(std::string_view s) {
  if (s.empty()) return std::nullopt;
  auto ok = [](std::string_view v) {
    if (v.empty()) return false;
    std::size_t i = v[0] == '-' ? 1 : 0;
    if (i == v.size()) return false;
    for (; i < v.size(); ++i)
      if (v[i] < '0' || v[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : s.substr(slash + 1);
  if (!ok(num) || !ok(den)) return std::nullopt;
  Rat q(std::string(num) + "/" + std::string(den));
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

}  // namespace dgres
