// Text format for describing resolving algebras, morphisms between them, and
// augmentation points. `parse` turns a source string into a Workspace;
// `serialize` renders a Workspace back so that parse(serialize(w)) == w.
//
//   algebra L2 {
//     gen x: -2;
//     gen xi: -5;
//     d xi = x^2;
//   }
//   morphism f: L2 -> L2 { x -> x; xi -> xi; }
//   point p0 on L2 { x = 0; }
//
// Generators may carry `weight INT` after the degree. Inside an algebra body,
//   adjoin y: 0, eta: -1 with d eta = y*g - 1;
// is sugar for the corresponding gen/d declarations. `#` starts a line
// comment. Morphism entries default to 0 for unlisted generators, as do
// point values.
#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dgres/algebra.hpp"

namespace dgres::dsl {

struct Location {
  std::size_t line = 1;
  std::size_t col = 1;
};

// kind() is "lexical", "syntax", or "resolution"; what() embeds the location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string kind, Location loc, const std::string& msg)
      : std::runtime_error(kind + " error at line " + std::to_string(loc.line) + ", column " +
                           std::to_string(loc.col) + ": " + msg),
        kind_(std::move(kind)),
        loc_(loc) {}
  const std::string& kind() const { return kind_; }
  Location where() const { return loc_; }

 private:
  std::string kind_;
  Location loc_;
};

struct NamedMorphism {
  std::string src, dst;  // workspace algebra names
  DGAMorphism f;

  bool operator==(const NamedMorphism& o) const {
    return src == o.src && dst == o.dst && f.src == o.f.src && f.dst == o.f.dst &&
           f.val == o.f.val;
  }
};

struct NamedPoint {
  std::string on;  // workspace algebra name
  Augmentation point;

  bool operator==(const NamedPoint& o) const {
    return on == o.on && point.alg == o.point.alg && point.val == o.point.val;
  }
};

struct Workspace {
  std::map<std::string, ResolvingAlgebra> algebras;
  std::map<std::string, NamedMorphism> morphisms;
  std::map<std::string, NamedPoint> points;

  const ResolvingAlgebra& algebra(const std::string& name) const {
    auto it = algebras.find(name);
    if (it == algebras.end()) throw std::invalid_argument("unknown algebra '" + name + "'");
    return it->second;
  }
  const NamedMorphism& morphism(const std::string& name) const {
    auto it = morphisms.find(name);
    if (it == morphisms.end()) throw std::invalid_argument("unknown morphism '" + name + "'");
    return it->second;
  }
  const NamedPoint& point(const std::string& name) const {
    auto it = points.find(name);
    if (it == points.end()) throw std::invalid_argument("unknown point '" + name + "'");
    return it->second;
  }

  bool operator==(const Workspace& o) const {
    return algebras == o.algebras && morphisms == o.morphisms && points == o.points;
  }
};

namespace detail {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  Location loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_trivia();
    Token t;
    t.loc = loc_;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isalpha(uc(c)) || c == '_') {
      t.type = Tok::Ident;
      while (pos_ < text_.size() &&
             (std::isalnum(uc(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
        t.text += take();
      return t;
    }
    if (std::isdigit(uc(c))) {
      t.type = Tok::Number;
      while (pos_ < text_.size() && std::isdigit(uc(text_[pos_]))) t.text += take();
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(uc(text_[pos_ + 1]))) {
        t.text += take();
        while (pos_ < text_.size() && std::isdigit(uc(text_[pos_]))) t.text += take();
      }
      return t;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      t.type = Tok::Punct;
      t.text = "->";
      take();
      take();
      return t;
    }
    if (std::string_view("{}();:,^*+-=").find(c) != std::string_view::npos) {
      t.type = Tok::Punct;
      t.text = std::string(1, take());
      return t;
    }
    throw ParseError("lexical", loc_, std::string("unexpected character '") + c + "'");
  }

 private:
  static unsigned char uc(char c) { return static_cast<unsigned char>(c); }

  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++loc_.line;
      loc_.col = 1;
    } else {
      ++loc_.col;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(uc(text_[pos_]))) take();
      if (pos_ < text_.size() && text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Location loc_;
};

using GenNames = std::map<std::string, GenId, std::less<>>;

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { advance(); }

  void parse_file(Workspace& w) {
    while (cur_.type != Tok::End) {
      if (cur_.type != Tok::Ident)
        throw ParseError("syntax", cur_.loc, "expected 'algebra', 'morphism', or 'point'");
      if (cur_.text == "algebra")
        parse_algebra(w);
      else if (cur_.text == "morphism")
        parse_morphism(w);
      else if (cur_.text == "point")
        parse_point(w);
      else
        throw ParseError("syntax", cur_.loc,
                         "expected 'algebra', 'morphism', or 'point', got '" + cur_.text + "'");
    }
  }

  // One expression over the generators of an existing algebra.
  Poly parse_element_over(const ResolvingAlgebra& A) {
    GenNames gens;
    for (GenId g = 0; g < A.ngens(); ++g) gens.emplace(A.gen(g).name, g);
    Poly p = parse_poly(A.scope(), gens);
    if (cur_.type != Tok::End)
      throw ParseError("syntax", cur_.loc, "unexpected '" + shown() + "' after expression");
    return p;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  bool at_punct(std::string_view p) const { return cur_.type == Tok::Punct && cur_.text == p; }

  Token expect_ident(const std::string& what) {
    if (cur_.type != Tok::Ident)
      throw ParseError("syntax", cur_.loc, "expected " + what + ", got '" + shown() + "'");
    Token t = cur_;
    advance();
    return t;
  }

  void expect_punct(std::string_view p) {
    if (!at_punct(p))
      throw ParseError("syntax", cur_.loc,
                       "expected '" + std::string(p) + "', got '" + shown() + "'");
    advance();
  }

  std::string shown() const { return cur_.type == Tok::End ? "end of input" : cur_.text; }

  long parse_integer(const std::string& what) {
    bool neg = false;
    if (at_punct("-")) {
      neg = true;
      advance();
    }
    if (cur_.type != Tok::Number || cur_.text.find('/') != std::string::npos)
      throw ParseError("syntax", cur_.loc, "expected " + what + ", got '" + shown() + "'");
    long v = 0;
    try {
      v = std::stol(cur_.text);
    } catch (const std::exception&) {
      throw ParseError("syntax", cur_.loc, what + " out of range: '" + cur_.text + "'");
    }
    advance();
    return neg ? -v : v;
  }

  Rat parse_rational() {
    bool neg = false;
    if (at_punct("-")) {
      neg = true;
      advance();
    }
    if (cur_.type != Tok::Number)
      throw ParseError("syntax", cur_.loc, "expected a rational number, got '" + shown() + "'");
    auto q = rat_parse(cur_.text);
    if (!q) throw ParseError("lexical", cur_.loc, "bad number '" + cur_.text + "'");
    advance();
    return neg ? Rat(-*q) : *q;
  }

  // --- polynomial expressions ------------------------------------------

  Poly parse_poly(const ScopePtr& sc, const GenNames& gens) {
    Poly acc = parse_term(sc, gens);
    while (at_punct("+") || at_punct("-")) {
      bool plus = cur_.text == "+";
      advance();
      Poly t = parse_term(sc, gens);
      acc = plus ? acc + t : acc - t;
    }
    return acc;
  }

  Poly parse_term(const ScopePtr& sc, const GenNames& gens) {
    Poly acc = parse_factor(sc, gens);
    while (at_punct("*")) {
      advance();
      acc = acc * parse_factor(sc, gens);
    }
    return acc;
  }

  Poly parse_factor(const ScopePtr& sc, const GenNames& gens) {
    if (at_punct("-")) {
      advance();
      return -parse_factor(sc, gens);
    }
    Poly base = parse_atom(sc, gens);
    while (at_punct("^")) {
      advance();
      long e = parse_integer("an exponent");
      if (e < 0) throw ParseError("syntax", cur_.loc, "negative exponent");
      base = base.pow(static_cast<std::uint32_t>(e));
    }
    return base;
  }

  Poly parse_atom(const ScopePtr& sc, const GenNames& gens) {
    if (cur_.type == Tok::Number) {
      auto q = rat_parse(cur_.text);
      if (!q) throw ParseError("lexical", cur_.loc, "bad number '" + cur_.text + "'");
      advance();
      return Poly(*q);
    }
    if (cur_.type == Tok::Ident) {
      auto it = gens.find(cur_.text);
      if (it == gens.end())
        throw ParseError("resolution", cur_.loc, "unknown generator '" + cur_.text + "'");
      advance();
      return Poly::generator(sc, it->second);
    }
    if (at_punct("(")) {
      advance();
      Poly p = parse_poly(sc, gens);
      expect_punct(")");
      return p;
    }
    throw ParseError("syntax", cur_.loc, "expected a number, generator, or '(' in expression");
  }

  // --- declarations ------------------------------------------------------

  void parse_gen_decl(ResolvingAlgebra& A, GenNames& gens) {
    Token g = expect_ident("a generator name");
    if (gens.count(g.text))
      throw ParseError("resolution", g.loc, "generator '" + g.text + "' already declared");
    expect_punct(":");
    long deg = parse_integer("a degree");
    if (deg > 0)
      throw ParseError("resolution", g.loc,
                       "generator '" + g.text + "' has positive degree " + std::to_string(deg));
    long weight = 0;
    if (cur_.type == Tok::Ident && cur_.text == "weight") {
      advance();
      weight = parse_integer("a weight");
    }
    GenId id = A.add_gen(g.text, static_cast<int>(deg), static_cast<int>(weight));
    gens.emplace(g.text, id);
  }

  void parse_d_decl(ResolvingAlgebra& A, const GenNames& gens, std::set<GenId>& have_d) {
    Token g = expect_ident("a generator name");
    auto it = gens.find(g.text);
    if (it == gens.end())
      throw ParseError("resolution", g.loc, "unknown generator '" + g.text + "'");
    if (!have_d.insert(it->second).second)
      throw ParseError("resolution", g.loc, "d " + g.text + " given twice");
    expect_punct("=");
    Poly v = parse_poly(A.scope(), gens);
    A.set_d(it->second, std::move(v));
  }

  void parse_algebra(Workspace& w) {
    advance();  // 'algebra'
    Token name = expect_ident("an algebra name");
    if (w.algebras.count(name.text))
      throw ParseError("resolution", name.loc, "algebra '" + name.text + "' already defined");
    expect_punct("{");
    ResolvingAlgebra A;
    GenNames gens;
    std::set<GenId> have_d;
    while (!at_punct("}")) {
      Token kw = expect_ident("'gen', 'd', 'adjoin', or '}'");
      if (kw.text == "gen") {
        parse_gen_decl(A, gens);
      } else if (kw.text == "d") {
        parse_d_decl(A, gens, have_d);
      } else if (kw.text == "adjoin") {
        // adjoin a: -1, b: -2 with d b = a^2, d a = 0;
        for (;;) {
          parse_gen_decl(A, gens);
          if (!at_punct(",")) break;
          advance();
        }
        if (cur_.type == Tok::Ident && cur_.text == "with") {
          advance();
          for (;;) {
            Token dkw = expect_ident("'d'");
            if (dkw.text != "d")
              throw ParseError("syntax", dkw.loc, "expected 'd', got '" + dkw.text + "'");
            parse_d_decl(A, gens, have_d);
            if (!at_punct(",")) break;
            advance();
          }
        }
      } else {
        throw ParseError("syntax", kw.loc,
                         "expected 'gen', 'd', or 'adjoin', got '" + kw.text + "'");
      }
      expect_punct(";");
    }
    expect_punct("}");
    w.algebras.emplace(name.text, std::move(A));
  }

  void parse_morphism(Workspace& w) {
    advance();  // 'morphism'
    Token name = expect_ident("a morphism name");
    if (w.morphisms.count(name.text))
      throw ParseError("resolution", name.loc, "morphism '" + name.text + "' already defined");
    expect_punct(":");
    Token src = expect_ident("a source algebra name");
    expect_punct("->");
    Token dst = expect_ident("a target algebra name");
    auto si = w.algebras.find(src.text);
    if (si == w.algebras.end())
      throw ParseError("resolution", src.loc, "unknown algebra '" + src.text + "'");
    auto di = w.algebras.find(dst.text);
    if (di == w.algebras.end())
      throw ParseError("resolution", dst.loc, "unknown algebra '" + dst.text + "'");
    const ResolvingAlgebra& S = si->second;
    const ResolvingAlgebra& D = di->second;
    GenNames dgens;
    for (GenId g = 0; g < D.ngens(); ++g) dgens.emplace(D.gen(g).name, g);
    DGAMorphism f{S, D, std::vector<Poly>(S.ngens())};
    std::vector<bool> assigned(S.ngens(), false);
    expect_punct("{");
    while (!at_punct("}")) {
      Token g = expect_ident("a generator name");
      auto gi = S.find(g.text);
      if (!gi)
        throw ParseError("resolution", g.loc,
                         "unknown generator '" + g.text + "' in algebra '" + src.text + "'");
      if (assigned[*gi])
        throw ParseError("resolution", g.loc, "image of '" + g.text + "' given twice");
      assigned[*gi] = true;
      expect_punct("->");
      f.val[*gi] = parse_poly(D.scope(), dgens);
      expect_punct(";");
    }
    expect_punct("}");
    w.morphisms.emplace(name.text, NamedMorphism{src.text, dst.text, std::move(f)});
  }

  void parse_point(Workspace& w) {
    advance();  // 'point'
    Token name = expect_ident("a point name");
    if (w.points.count(name.text))
      throw ParseError("resolution", name.loc, "point '" + name.text + "' already defined");
    Token on = expect_ident("'on'");
    if (on.text != "on") throw ParseError("syntax", on.loc, "expected 'on', got '" + on.text + "'");
    Token alg = expect_ident("an algebra name");
    auto ai = w.algebras.find(alg.text);
    if (ai == w.algebras.end())
      throw ParseError("resolution", alg.loc, "unknown algebra '" + alg.text + "'");
    const ResolvingAlgebra& A = ai->second;
    Augmentation eps{A, std::vector<Rat>(A.ngens(), Rat(0))};
    std::vector<bool> assigned(A.ngens(), false);
    expect_punct("{");
    while (!at_punct("}")) {
      Token g = expect_ident("a generator name");
      auto gi = A.find(g.text);
      if (!gi)
        throw ParseError("resolution", g.loc,
                         "unknown generator '" + g.text + "' in algebra '" + alg.text + "'");
      if (assigned[*gi])
        throw ParseError("resolution", g.loc, "value of '" + g.text + "' given twice");
      assigned[*gi] = true;
      expect_punct("=");
      eps.val[*gi] = parse_rational();
      expect_punct(";");
    }
    expect_punct("}");
    w.points.emplace(name.text, NamedPoint{alg.text, std::move(eps)});
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace detail

// Parses into an existing workspace, so several files can share one set of
// names (cross-file references resolve in file order).
inline void parse_into(Workspace& w, std::string_view text) {
  detail::Parser p(text);
  p.parse_file(w);
}

inline Workspace parse(std::string_view text) {
  Workspace w;
  parse_into(w, text);
  return w;
}

// One polynomial expression over an algebra's generators (command-line use).
inline Poly parse_element(const ResolvingAlgebra& A, std::string_view text) {
  detail::Parser p(text);
  return p.parse_element_over(A);
}

inline std::string serialize_algebra(const std::string& name, const ResolvingAlgebra& A) {
  std::ostringstream os;
  os << "algebra " << name << " {\n";
  for (GenId g = 0; g < A.ngens(); ++g) {
    const GenInfo& info = A.gen(g);
    os << "  gen " << info.name << ": " << info.degree;
    if (info.weight != 0) os << " weight " << info.weight;
    os << ";\n";
  }
  for (GenId g = 0; g < A.ngens(); ++g)
    if (!A.d_gen(g).is_zero())
      os << "  d " << A.gen(g).name << " = " << A.d_gen(g).str() << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string serialize(const Workspace& w) {
  std::ostringstream os;
  bool first = true;
  auto gap = [&] {
    if (!first) os << "\n";
    first = false;
  };
  for (auto& [name, A] : w.algebras) {
    gap();
    os << serialize_algebra(name, A);
  }
  for (auto& [name, m] : w.morphisms) {
    gap();
    os << "morphism " << name << ": " << m.src << " -> " << m.dst << " {\n";
    for (GenId g = 0; g < m.f.src.ngens(); ++g)
      if (!m.f.val[g].is_zero())
        os << "  " << m.f.src.gen(g).name << " -> " << m.f.val[g].str() << ";\n";
    os << "}\n";
  }
  for (auto& [name, p] : w.points) {
    gap();
    os << "point " << name << " on " << p.on << " {\n";
    for (GenId g = 0; g < p.point.alg.ngens(); ++g)
      if (p.point.val[g] != 0)
        os << "  " << p.point.alg.gen(g).name << " = " << rat_str(p.point.val[g]) << ";\n";
    os << "}\n";
  }
  return os.str();
}

}  // namespace dgres::dsl
