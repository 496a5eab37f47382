#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgres/rational.hpp"
#include "dgres/scope.hpp"

namespace dgres {

// Sorted multiset of generators; the canonical word of a graded-commutative
// monomial lists generator ids in increasing order.
class Monomial {
 public:
  using Entry = std::pair<GenId, std::uint32_t>;  // (generator, exponent >= 1)

  Monomial() = default;
  static Monomial one() { return {}; }
  static Monomial gen(GenId g, std::uint32_t exp = 1) {
    Monomial m;
    if (exp > 0) m.e_.emplace_back(g, exp);
    return m;
  }
  static Monomial of(std::vector<Entry> entries) {
    Monomial m;
    m.e_ = std::move(entries);
    std::sort(m.e_.begin(), m.e_.end());
    return m;
  }

  bool is_one() const { return e_.empty(); }
  const std::vector<Entry>& entries() const { return e_; }

  std::uint32_t total_exponent() const {
    std::uint32_t t = 0;
    for (auto& [g, e] : e_) t += e;
    return t;
  }

  std::uint32_t exponent_of(GenId g) const {
    for (auto& [h, e] : e_)
      if (h == g) return e;
    return 0;
  }

  int degree(const Scope& sc) const {
    int d = 0;
    for (auto& [g, e] : e_) d += sc.degree(g) * static_cast<int>(e);
    return d;
  }

  bool divides(const Monomial& m) const {
    for (auto& [g, e] : e_)
      if (m.exponent_of(g) < e) return false;
    return true;
  }

  // m / this, assuming divisibility.
  Monomial quotient(const Monomial& m) const {
    std::vector<Entry> out;
    for (auto& [g, e] : m.e_) {
      std::uint32_t q = e - exponent_of(g);
      if (q > 0) out.emplace_back(g, q);
    }
    return of(std::move(out));
  }

  Monomial erase_one(GenId g) const {
    std::vector<Entry> out;
    for (auto& [h, e] : e_) {
      if (h == g) {
        if (e > 1) out.emplace_back(h, e - 1);
      } else {
        out.emplace_back(h, e);
      }
    }
    return of(std::move(out));
  }

  auto operator<=>(const Monomial&) const = default;

 private:
  std::vector<Entry> e_;
};

struct SignedMono {
  int sign = 0;  // 0 means the product vanished (odd generator squared)
  Monomial m;
};

// Product of canonical words. Reordering the concatenation into the canonical
// word transposes each factor of the right word past the later factors of the
// left word; each swap of two odd generators contributes -1.
inline SignedMono mono_mul(const Scope& sc, const Monomial& a, const Monomial& b) {
  // Count, for every odd factor of b, the odd factors of a it must pass.
  long swaps = 0;
  for (auto& [g, e] : b.entries()) {
    if (!sc.odd(g)) continue;
    for (auto& [h, f] : a.entries())
      if (h > g && sc.odd(h)) swaps += 1;  // odd exponents are always 1
  }
  std::vector<Monomial::Entry> merged;
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      merged.push_back(*ia++);
    } else if (ia == ea || ib->first < ia->first) {
      merged.push_back(*ib++);
    } else {
      std::uint32_t exp = ia->second + ib->second;
      if (sc.odd(ia->first)) return {0, {}};  // odd generator squares to zero
      merged.emplace_back(ia->first, exp);
      ++ia, ++ib;
    }
  }
  return {swaps % 2 == 0 ? 1 : -1, Monomial::of(std::move(merged))};
}

// Element of the free graded-commutative algebra over Q on a scope's
// generators. Immutable in spirit: every operation returns a fresh value and
// zero coefficients are pruned eagerly, so equal elements compare equal.
class Poly {
 public:
  Poly() = default;
  Poly(const Rat& c) {  // NOLINT: implicit constant embedding is intended
    if (c != 0) t_[Monomial::one()] = c;
  }
  Poly(long c) : Poly(Rat(c)) {}

  static Poly generator(ScopePtr sc, GenId g) {
    Poly p;
    p.sc_ = std::move(sc);
    if (static_cast<std::size_t>(g) >= p.sc_->size())
      throw std::out_of_range("generator id outside scope");
    p.t_[Monomial::gen(g)] = 1;
    return p;
  }

  static Poly term(ScopePtr sc, Rat c, Monomial m) {
    Poly p;
    p.sc_ = std::move(sc);
    if (c != 0) p.t_[std::move(m)] = std::move(c);
    return p;
  }

  const ScopePtr& scope() const { return sc_; }
  const std::map<Monomial, Rat>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t term_count() const { return t_.size(); }

  bool is_constant() const {
    return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one());
  }
  Rat constant_term() const {
    auto it = t_.find(Monomial::one());
    return it == t_.end() ? Rat(0) : it->second;
  }

  Rat coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Rat(0) : it->second;
  }

  // Re-tags the element with a deeper compatible scope.
  Poly rescope(const ScopePtr& deeper) const {
    Poly p = *this;
    p.sc_ = common_scope(deeper, sc_);
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    r.sc_ = common_scope(a.sc_, b.sc_);
    for (auto& [m, c] : b.t_) r.add_term(m, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    r.sc_ = common_scope(a.sc_, b.sc_);
    for (auto& [m, c] : b.t_) r.add_term(m, -c);
    return r;
  }
  Poly operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    r.sc_ = common_scope(a.sc_, b.sc_);
    for (auto& [ma, ca] : a.t_) {
      for (auto& [mb, cb] : b.t_) {
        if (ma.is_one() || mb.is_one()) {
          r.add_term(ma.is_one() ? mb : ma, ca * cb);
          continue;
        }
        SignedMono sm = mono_mul(*r.sc_, ma, mb);
        if (sm.sign != 0) r.add_term(sm.m, ca * cb * sm.sign);
      }
    }
    return r;
  }

  friend Poly operator*(const Rat& c, const Poly& p) {
    Poly r;
    r.sc_ = p.sc_;
    if (c == 0) return r;
    r.t_ = p.t_;
    for (auto& [m, v] : r.t_) v *= c;
    return r;
  }
  friend Poly operator*(const Poly& p, const Rat& c) { return c * p; }

  Poly pow(std::uint32_t n) const {
    Poly r(1);
    for (std::uint32_t i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  bool operator==(const Poly& b) const {
    return t_ == b.t_;  // scopes need not be pointer-equal
  }

  // Degree bookkeeping. A zero element is homogeneous of every degree.
  bool is_homogeneous() const {
    std::optional<int> d;
    for (auto& [m, c] : t_) {
      int md = sc_ ? m.degree(*sc_) : 0;
      if (d && *d != md) return false;
      d = md;
    }
    return true;
  }

  // Degree of a homogeneous element; nullopt for 0, throws if mixed.
  std::optional<int> hom_degree() const {
    std::optional<int> d;
    for (auto& [m, c] : t_) {
      int md = sc_ ? m.degree(*sc_) : 0;
      if (d && *d != md) throw std::logic_error("inhomogeneous element has no degree");
      d = md;
    }
    return d;
  }

  Poly degree_component(int k) const {
    Poly r;
    r.sc_ = sc_;
    for (auto& [m, c] : t_)
      if ((sc_ ? m.degree(*sc_) : 0) == k) r.t_[m] = c;
    return r;
  }

  std::map<int, Poly> by_degree() const {
    std::map<int, Poly> out;
    for (auto& [m, c] : t_) {
      int d = sc_ ? m.degree(*sc_) : 0;
      auto& p = out[d];
      p.sc_ = sc_;
      p.t_[m] = c;
    }
    return out;
  }

  // Left partial derivative: the occurrence of g is moved to the front of the
  // canonical word and struck; the sign is deg(g) times the degree of the
  // factors it passes. Satisfies d(pq) = (dp)q + (-1)^{deg g * deg p} p (dq).
  Poly graded_partial(GenId g) const {
    Poly r;
    r.sc_ = sc_;
    if (!sc_) return r;
    for (auto& [m, c] : t_) {
      std::uint32_t e = m.exponent_of(g);
      if (e == 0) continue;
      int prefix_deg = 0;
      for (auto& [h, f] : m.entries()) {
        if (h >= g) break;
        prefix_deg += sc_->degree(h) * static_cast<int>(f);
      }
      int sign = (sc_->degree(g) * prefix_deg) % 2 == 0 ? 1 : -1;
      r.add_term(m.erase_one(g), c * static_cast<long>(e) * sign);
    }
    return r;
  }

  // Graded-algebra morphism determined by generator images. `images` is
  // indexed by generator id and must cover every generator that occurs.
  Poly substitute(const ScopePtr& target, const std::vector<Poly>& images) const {
    Poly r;
    r.sc_ = target;
    for (auto& [m, c] : t_) {
      Poly acc = Poly(c).rescope(target);
      for (auto& [g, e] : m.entries()) {
        if (static_cast<std::size_t>(g) >= images.size())
          throw std::out_of_range("substitute: no image for generator");
        acc = acc * images[g].pow(e);
        if (acc.is_zero()) break;
      }
      r += acc;
    }
    return r;
  }

  Rat evaluate(const std::function<Rat(GenId)>& v) const {
    Rat total(0);
    for (auto& [m, c] : t_) {
      Rat acc = c;
      for (auto& [g, e] : m.entries()) {
        Rat base = v(g);
        for (std::uint32_t i = 0; i < e && acc != 0; ++i) acc *= base;
        if (acc == 0) break;
      }
      total += acc;
    }
    return total;
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }

  std::string str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : t_) {
      Rat a = c;
      if (first) {
        if (a < 0) {
          os << "-";
          a = -a;
        }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      bool unit_coeff = (a == 1) && !m.is_one();
      if (!unit_coeff) os << rat_str(a);
      bool need_star = !unit_coeff;
      for (auto& [g, e] : m.entries()) {
        if (need_star) os << "*";
        os << (*sc_)[g].name;
        if (e > 1) os << "^" << e;
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  void add_term(const Monomial& m, Rat c) {
    if (c == 0) return;
    auto [it, inserted] = t_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }

  ScopePtr sc_;  // null for rational constants
  std::map<Monomial, Rat> t_;
};

}  // namespace dgres
