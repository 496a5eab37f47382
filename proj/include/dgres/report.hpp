// JSON report assembly for the command-line tool, plus a plain-text renderer
// for --pretty. Reports follow one shape:
//   { "command", "inputs", "mode", <payload>, "diagnostics", "version" }
// where <payload> is "verdict", "dimensions", or "witness" depending on the
// command. Key order is fixed so identical inputs give byte-identical output.
#pragma once

#include <json.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/simplex.hpp"
#include "dgres/version.hpp"

namespace dgres::report {

using Json = nlohmann::ordered_json;

inline Json make(const std::string& command, const std::string& mode) {
  Json j;
  j["command"] = command;
  j["inputs"] = Json::object();
  j["mode"] = mode;
  return j;
}

inline void finish(Json& j, const std::vector<std::string>& diagnostics) {
  j["diagnostics"] = diagnostics;
  j["version"] = kVersion;
}

// {"-5": 0, ..., "0": 1} over the full requested window, zeros included.
inline Json degree_map(const std::map<int, std::size_t>& dims, int lo, int hi) {
  Json out = Json::object();
  for (int d = lo; d <= hi; ++d) {
    auto it = dims.find(d);
    out[std::to_string(d)] = (it == dims.end()) ? 0 : it->second;
  }
  return out;
}

inline std::string form_str(const SimplexForm& w) {
  if (w.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto& [k, c] : w.terms()) {
    if (!first) out += " + ";
    first = false;
    std::string mono;
    auto append_factor = [&](const std::string& f) {
      if (!mono.empty()) mono += "*";
      mono += f;
    };
    for (std::size_t i = 0; i < k.t.size(); ++i) {
      if (k.t[i] == 0) continue;
      std::string f = "t" + std::to_string(i + 1);
      if (k.t[i] > 1) f += "^" + std::to_string(k.t[i]);
      append_factor(f);
    }
    for (std::size_t i = 0; i < k.t.size(); ++i)
      if ((k.dt >> i) & 1u) append_factor("dt" + std::to_string(i + 1));
    if (mono.empty()) {
      out += c.str();
    } else if (c == Poly(1)) {
      out += mono;
    } else if (c.term_count() > 1) {
      out += "(" + c.str() + ")*" + mono;
    } else {
      out += c.str() + "*" + mono;
    }
  }
  return out;
}

// Generator-by-generator tables; zero entries are kept so the shape is clear.
inline Json morphism_values(const DGAMorphism& f) {
  Json out = Json::object();
  for (GenId g = 0; g < f.src.ngens(); ++g) out[f.src.gen(g).name] = f.val[g].str();
  return out;
}

inline Json simplex_values(const SimplexMorphism& m) {
  Json out = Json::object();
  for (GenId g = 0; g < m.src.ngens(); ++g) out[m.src.gen(g).name] = form_str(m.val[g]);
  return out;
}

// --- --pretty ---------------------------------------------------------------

namespace detail {

inline std::string scalar_str(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void pretty_node(std::ostream& os, const Json& v, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (v.is_object()) {
    std::size_t width = 0;
    for (auto& [key, child] : v.items())
      if (!child.is_structured()) width = std::max(width, key.size());
    for (auto& [key, child] : v.items()) {
      if (child.is_structured()) {
        os << pad << key << "\n";
        pretty_node(os, child, depth + 1);
      } else {
        os << pad << key << std::string(width - key.size() + 2, ' ') << scalar_str(child)
           << "\n";
      }
    }
  } else if (v.is_array()) {
    for (auto& child : v) {
      if (child.is_structured()) {
        os << pad << "-\n";
        pretty_node(os, child, depth + 1);
      } else {
        os << pad << "- " << scalar_str(child) << "\n";
      }
    }
  } else {
    os << pad << scalar_str(v) << "\n";
  }
}

}  // namespace detail

inline std::string pretty(const Json& j) {
  std::ostringstream os;
  detail::pretty_node(os, j, 0);
  return os.str();
}

}  // namespace dgres::report
