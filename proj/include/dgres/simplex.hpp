#pragma once

// Polynomial differential forms on algebraic simplices with coefficients in a
// resolving algebra: elements of A (x) Q[t_1..t_l] (x) Lambda(dt_1..dt_l).
// Provides the canonical forms omega/tau/sigma, face restrictions, morphisms
// valued in forms, horn filling, and extrapolation from a face.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/cohomology.hpp"
#include "dgres/linalg.hpp"
#include "dgres/poly.hpp"
#include "dgres/solve.hpp"

namespace dgres {

// Simplex part of a term: exponents of t_1..t_l and a set of dt's
// (bit i-1 marks dt_i). The t's are even of degree 0, each dt_i is odd of
// degree +1.
struct FormKey {
  std::vector<std::uint32_t> t;
  std::uint32_t dt = 0;

  std::uint32_t t_total() const {
    std::uint32_t s = 0;
    for (auto e : t) s += e;
    return s;
  }

  friend bool operator<(const FormKey& a, const FormKey& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.dt < b.dt;
  }
  friend bool operator==(const FormKey& a, const FormKey& b) {
    return a.t == b.t && a.dt == b.dt;
  }
};

// Sign of merging two ascending dt-words: count transpositions needed to sort
// the concatenation a then b.
inline int dt_merge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (std::uint32_t bb = b; bb != 0; bb &= bb - 1) {
    std::uint32_t low = (bb & -bb) - 1;  // bits strictly below the lowest bit of bb
    inversions += std::popcount(a & ~low);
  }
  return inversions % 2 == 0 ? 1 : -1;
}

class SimplexForm {
 public:
  SimplexForm() = default;
  explicit SimplexForm(int ell) : ell_(check_ell(ell)) {}

  static SimplexForm constant(int ell, Poly c) {
    SimplexForm f(ell);
    f.add_term(FormKey{std::vector<std::uint32_t>(static_cast<std::size_t>(ell), 0), 0},
               std::move(c));
    return f;
  }

  // t_i and dt_i, with 1 <= i <= ell
  static SimplexForm coord(int ell, int i) {
    SimplexForm f(ell);
    FormKey k{std::vector<std::uint32_t>(static_cast<std::size_t>(ell), 0), 0};
    k.t[check_index(ell, i) - 1] = 1;
    f.add_term(std::move(k), Poly(1));
    return f;
  }
  static SimplexForm d_coord(int ell, int i) {
    SimplexForm f(ell);
    FormKey k{std::vector<std::uint32_t>(static_cast<std::size_t>(ell), 0), 0};
    k.dt = 1u << (check_index(ell, i) - 1);
    f.add_term(std::move(k), Poly(1));
    return f;
  }

  int ell() const { return ell_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<FormKey, Poly>& terms() const { return t_; }

  void add_term(FormKey k, Poly c) {
    if (c.is_zero()) return;
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(std::move(k), std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  friend SimplexForm operator+(const SimplexForm& a, const SimplexForm& b) {
    SimplexForm r = a.check_same(b);
    for (auto& [k, c] : b.t_) r.add_term(k, c);
    return r;
  }
  friend SimplexForm operator-(const SimplexForm& a, const SimplexForm& b) {
    SimplexForm r = a.check_same(b);
    for (auto& [k, c] : b.t_) r.add_term(k, -c);
    return r;
  }
  SimplexForm operator-() const {
    SimplexForm r(ell_);
    for (auto& [k, c] : t_) r.t_.emplace(k, -c);
    return r;
  }
  SimplexForm scaled(const Rat& c) const {
    SimplexForm r(ell_);
    if (c == 0) return r;
    for (auto& [k, p] : t_) r.t_.emplace(k, p * Poly(c));
    return r;
  }

  friend SimplexForm operator*(const SimplexForm& a, const SimplexForm& b) {
    SimplexForm r = a.check_same(b);
    r.t_.clear();
    for (auto& [ka, ca] : a.t_) {
      int q = std::popcount(ka.dt);
      for (auto& [kb, cb] : b.t_) {
        if (ka.dt & kb.dt) continue;  // repeated dt
        FormKey k{ka.t, ka.dt | kb.dt};
        for (std::size_t i = 0; i < k.t.size(); ++i) k.t[i] += kb.t[i];
        int merge = dt_merge_sign(ka.dt, kb.dt);
        // move the right coefficient past the left dt-block
        Poly coeff;
        if (q % 2 == 0) {
          coeff = ca * cb;
        } else {
          for (auto& [deg, comp] : cb.by_degree()) {
            Poly piece = ca * comp;
            coeff += (deg % 2 != 0) ? -piece : piece;
          }
        }
        r.add_term(std::move(k), merge < 0 ? -coeff : coeff);
      }
    }
    return r;
  }

  friend bool operator==(const SimplexForm& a, const SimplexForm& b) {
    return a.ell_ == b.ell_ && a.t_ == b.t_;
  }
  friend bool operator!=(const SimplexForm& a, const SimplexForm& b) { return !(a == b); }

  SimplexForm pow(std::uint32_t e) const {
    SimplexForm r = constant(ell_, Poly(1));
    for (std::uint32_t i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  // d in the simplex variables only, treating coefficients as constants
  SimplexForm t_differential() const {
    SimplexForm r(ell_);
    for (auto& [k, c] : t_) d_t_of_term(k, c, 1, r);
    return r;
  }

  // total differential d_A (x) 1 + (-1)^{deg a} 1 (x) d_t
  SimplexForm total_d(const ResolvingAlgebra& A) const {
    SimplexForm r(ell_);
    for (auto& [k, c] : t_) {
      r.add_term(k, A.d(c));
      for (auto& [deg, comp] : c.by_degree())
        d_t_of_term(k, comp, deg % 2 != 0 ? -1 : 1, r);
    }
    return r;
  }

  // pullback along an affine coordinate change: images[i] is the image of
  // t_{i+1} and must be a dt-free form with degree-0 coefficients
  SimplexForm subst(int m, const std::vector<SimplexForm>& images) const {
    if (images.size() != static_cast<std::size_t>(ell_))
      throw std::invalid_argument("coordinate substitution needs one image per t variable");
    std::vector<SimplexForm> dimg;
    dimg.reserve(images.size());
    for (auto& im : images) {
      if (im.ell_ != m) throw std::invalid_argument("coordinate image on the wrong simplex");
      for (auto& [k, c] : im.t_)
        if (k.dt != 0 || !c.is_constant())
          throw std::invalid_argument("coordinate images must be plain t-polynomials");
      dimg.push_back(im.t_differential());
    }
    SimplexForm out(m);
    for (auto& [k, c] : t_) {
      SimplexForm acc = constant(m, c);
      for (std::size_t i = 0; i < k.t.size() && !acc.is_zero(); ++i)
        if (k.t[i] > 0) acc = acc * images[i].pow(k.t[i]);
      for (int i = 1; i <= ell_ && !acc.is_zero(); ++i)
        if (k.dt & (1u << (i - 1))) acc = acc * dimg[static_cast<std::size_t>(i - 1)];
      out = out + acc;
    }
    return out;
  }

  // restriction to the i-th face of the simplex, renumbering coordinates:
  // face 0 substitutes t_1 = 1 - sum of the rest, faces 1..ell set t_i = 0
  SimplexForm face(int i) const {
    if (ell_ == 0) throw std::invalid_argument("a point has no faces");
    if (i < 0 || i > ell_) throw std::invalid_argument("face index out of range");
    int m = ell_ - 1;
    std::vector<SimplexForm> img;
    img.reserve(static_cast<std::size_t>(ell_));
    if (i == 0) {
      SimplexForm first = constant(m, Poly(1));
      for (int j = 1; j <= m; ++j) first = first - coord(m, j);
      img.push_back(std::move(first));
      for (int j = 2; j <= ell_; ++j) img.push_back(coord(m, j - 1));
    } else {
      for (int j = 1; j <= ell_; ++j) {
        if (j == i)
          img.push_back(SimplexForm(m));
        else
          img.push_back(coord(m, j < i ? j : j - 1));
      }
    }
    return subst(m, img);
  }

  // set t_i = 0 and dt_i = 0 without renumbering
  SimplexForm restrict_zero(int i) const {
    check_index(ell_, i);
    std::vector<SimplexForm> img;
    img.reserve(static_cast<std::size_t>(ell_));
    for (int j = 1; j <= ell_; ++j)
      img.push_back(j == i ? SimplexForm(ell_) : coord(ell_, j));
    return subst(ell_, img);
  }

  // the coordinate involution exchanging vertex 0 with vertex k:
  // t_k goes to 1 - sum of all t's, the others stay put
  SimplexForm swap_vertex(int k) const {
    check_index(ell_, k);
    std::vector<SimplexForm> img;
    img.reserve(static_cast<std::size_t>(ell_));
    for (int j = 1; j <= ell_; ++j) {
      if (j != k) {
        img.push_back(coord(ell_, j));
        continue;
      }
      SimplexForm f = constant(ell_, Poly(1));
      for (int i = 1; i <= ell_; ++i) f = f - coord(ell_, i);
      img.push_back(std::move(f));
    }
    return subst(ell_, img);
  }

  // a form with no t or dt content is a plain coefficient
  Poly as_poly() const {
    Poly p;
    for (auto& [k, c] : t_) {
      if (k.dt != 0 || k.t_total() != 0)
        throw std::logic_error("the form still involves the simplex variables");
      p += c;
    }
    return p;
  }

  bool is_homogeneous_of(int n) const {
    for (auto& [k, c] : t_) {
      int q = std::popcount(k.dt);
      for (auto& [deg, comp] : c.by_degree())
        if (deg + q != n) return false;
    }
    return true;
  }

  // degree of a homogeneous nonzero form
  std::optional<int> hom_degree() const {
    std::optional<int> d;
    for (auto& [k, c] : t_) {
      int q = std::popcount(k.dt);
      for (auto& [deg, comp] : c.by_degree()) {
        if (d && *d != deg + q)
          throw std::logic_error("inhomogeneous form has no degree");
        d = deg + q;
      }
    }
    return d;
  }

  std::uint32_t t_degree() const {
    std::uint32_t m = 0;
    for (auto& [k, c] : t_) m = std::max(m, k.t_total());
    return m;
  }

 private:
  static int check_ell(int ell) {
    if (ell < 0 || ell > 30) throw std::invalid_argument("simplex dimension out of range");
    return ell;
  }
  static int check_index(int ell, int i) {
    if (i < 1 || i > ell) throw std::invalid_argument("simplex coordinate index out of range");
    return i;
  }
  SimplexForm check_same(const SimplexForm& o) const {
    if (ell_ != o.ell_) throw std::invalid_argument("forms live on different simplices");
    return *this;
  }

  // contribution of d_t applied to c * t^k dt_S, with an outer sign
  static void d_t_of_term(const FormKey& k, const Poly& c, int outer, SimplexForm& r) {
    for (std::size_t i = 0; i < k.t.size(); ++i) {
      if (k.t[i] == 0) continue;
      std::uint32_t bit = 1u << i;
      if (k.dt & bit) continue;
      int below = std::popcount(k.dt & (bit - 1));
      int sign = outer * (below % 2 == 0 ? 1 : -1);
      FormKey nk = k;
      nk.t[i] -= 1;
      nk.dt |= bit;
      Poly piece = c * Poly(Rat(static_cast<long>(k.t[i])));
      r.add_term(std::move(nk), sign < 0 ? -piece : piece);
    }
  }

  int ell_ = 0;
  std::map<FormKey, Poly> t_;
};

namespace detail {
inline Rat factorial(int n) {
  Rat r(1);
  for (int i = 2; i <= n; ++i) r *= Rat(i);
  return r;
}
}  // namespace detail

// l! dt_1 ^ ... ^ dt_j placed on the l-simplex (j = l by default)
inline SimplexForm omega_on(int ell, int j) {
  if (j < 0 || j > ell) throw std::invalid_argument("omega block out of range");
  SimplexForm f(ell);
  FormKey k{std::vector<std::uint32_t>(static_cast<std::size_t>(ell), 0),
            j == 0 ? 0 : ((1u << j) - 1)};
  f.add_term(std::move(k), Poly(detail::factorial(j)));
  return f;
}

inline SimplexForm omega_form(int ell) { return omega_on(ell, ell); }

// tau_l = -(l-1)! sum_i (-1)^i t_i dt_1 ^ ... omit dt_i ... ^ dt_l;
// a primitive of omega_l vanishing on the faces t_i = 0. The defining
// identities are checked on construction for l <= 4.
inline SimplexForm tau_form(int ell) {
  if (ell < 1) throw std::invalid_argument("tau needs a positive simplex dimension");
  SimplexForm f(ell);
  Rat base = detail::factorial(ell - 1);
  std::uint32_t full = (ell == 31) ? ~0u : ((1u << ell) - 1);
  for (int i = 1; i <= ell; ++i) {
    FormKey k{std::vector<std::uint32_t>(static_cast<std::size_t>(ell), 0),
              full & ~(1u << (i - 1))};
    k.t[static_cast<std::size_t>(i - 1)] = 1;
    Rat c = (i % 2 == 0) ? -base : base;  // -(l-1)! (-1)^i
    f.add_term(std::move(k), Poly(c));
  }
  if (ell <= 4) {
    if (!(f.t_differential() == omega_form(ell)))
      throw std::logic_error("tau failed d(tau) = omega");
    for (int i = 1; i <= ell; ++i)
      if (!f.face(i).is_zero()) throw std::logic_error("tau failed to vanish on a face");
    if (!(f.face(0) == omega_form(ell - 1)))
      throw std::logic_error("tau failed face 0 = omega");
  }
  return f;
}

// sigma_l = tau_l + (-1)^l omega_{l-1}: the primitive of omega_l normalized
// to vanish on faces 0..l-1. Checked on construction for l <= 4.
inline SimplexForm sigma_form(int ell) {
  SimplexForm f = tau_form(ell);
  SimplexForm shift = omega_on(ell, ell - 1);
  f = (ell % 2 != 0) ? f - shift : f + shift;
  if (ell <= 4) {
    if (!(f.t_differential() == omega_form(ell)))
      throw std::logic_error("sigma failed d(sigma) = omega");
    for (int i = 0; i < ell; ++i)
      if (!f.face(i).is_zero()) throw std::logic_error("sigma failed to vanish on a face");
    SimplexForm last = omega_form(ell - 1);
    if (ell % 2 != 0) last = -last;
    if (!(f.face(ell) == last))
      throw std::logic_error("sigma failed its last-face identity");
  }
  return f;
}

// A morphism B -> A (x) Omega_l determined by generator images.
struct SimplexMorphism {
  ResolvingAlgebra src;
  ResolvingAlgebra ambient;
  int ell = 0;
  std::vector<SimplexForm> val;

  SimplexForm apply(const Poly& p) const {
    SimplexForm acc(ell);
    for (auto& [m, c] : p.terms()) {
      SimplexForm t = SimplexForm::constant(ell, Poly(c));
      for (auto& [g, e] : m.entries()) {
        if (static_cast<std::size_t>(g) >= val.size())
          throw std::out_of_range("no image for a generator");
        t = t * val[g].pow(e);
        if (t.is_zero()) break;
      }
      acc = acc + t;
    }
    return acc;
  }

  ValidationReport validate() const {
    ValidationReport rep;
    if (val.size() != src.ngens()) {
      rep.fail("generator image count does not match the source");
      return rep;
    }
    for (GenId g = 0; g < src.ngens(); ++g) {
      if (val[g].ell() != ell) {
        rep.fail("image of " + src.gen(g).name + " lives on the wrong simplex");
        return rep;
      }
      if (!val[g].is_homogeneous_of(src.gen(g).degree))
        rep.fail("image of " + src.gen(g).name + " is not homogeneous of the right degree");
    }
    if (!rep.ok) return rep;
    for (GenId g = 0; g < src.ngens(); ++g)
      if (!(apply(src.d_gen(g)) == val[g].total_d(ambient)))
        rep.fail("chain condition fails on " + src.gen(g).name);
    return rep;
  }

  SimplexMorphism face(int i) const {
    SimplexMorphism r{src, ambient, ell - 1, {}};
    r.val.reserve(val.size());
    for (auto& v : val) r.val.push_back(v.face(i));
    return r;
  }

  DGAMorphism as_morphism() const {
    if (ell != 0) throw std::logic_error("only a point-level morphism collapses to the algebra");
    DGAMorphism f{src, ambient, {}};
    f.val.reserve(val.size());
    for (auto& v : val) f.val.push_back(v.as_poly().rescope(ambient.scope()));
    return f;
  }

  friend bool operator==(const SimplexMorphism& a, const SimplexMorphism& b) {
    return a.ell == b.ell && a.val == b.val;
  }
};

inline SimplexMorphism constant_simplex_morphism(const DGAMorphism& P, int ell) {
  SimplexMorphism r{P.src, P.dst, ell, {}};
  r.val.reserve(P.val.size());
  for (auto& p : P.val) r.val.push_back(SimplexForm::constant(ell, p));
  return r;
}

// One homogeneous solve step for d(theta) = target over A (x) Omega_l:
// candidates are A-monomials times t-monomials (total t-degree <= t_cap)
// times dt-blocks, with A-monomial exponents capped by exp_cap.
inline std::optional<SimplexForm> bounded_form_solve(const ResolvingAlgebra& A,
                                                     const SimplexForm& target,
                                                     std::uint32_t t_cap,
                                                     std::uint32_t exp_cap) {
  if (target.is_zero()) return SimplexForm(target.ell());
  auto deg = target.hom_degree();
  if (!deg) throw std::invalid_argument("the target form is not homogeneous");
  int ell = target.ell();

  std::vector<std::vector<std::uint32_t>> tmonos;
  std::vector<std::uint32_t> cur(static_cast<std::size_t>(ell), 0);
  auto rec = [&](auto&& self, int pos, std::uint32_t left) -> void {
    if (pos == ell) {
      tmonos.push_back(cur);
      return;
    }
    for (std::uint32_t e = 0; e <= left; ++e) {
      cur[static_cast<std::size_t>(pos)] = e;
      self(self, pos + 1, left - e);
    }
    cur[static_cast<std::size_t>(pos)] = 0;
  };
  rec(rec, 0, t_cap);

  std::vector<std::pair<FormKey, Monomial>> cands;
  for (std::uint32_t mask = 0; mask < (1u << ell); ++mask) {
    int p = *deg - 1 - std::popcount(mask);
    auto amons = enumerate_monomials(A, MonoSpec{p, std::nullopt, exp_cap});
    if (amons.empty()) continue;
    for (auto& tm : tmonos)
      for (auto& am : amons) cands.push_back({FormKey{tm, mask}, am});
  }
  if (cands.empty()) return std::nullopt;

  std::map<std::pair<FormKey, Monomial>, std::size_t> rows;
  auto row_of = [&](const FormKey& k, const Monomial& m) {
    return rows.emplace(std::make_pair(k, m), rows.size()).first->second;
  };
  std::vector<std::map<std::size_t, Rat>> cols(cands.size());
  for (std::size_t j = 0; j < cands.size(); ++j) {
    SimplexForm e(ell);
    e.add_term(cands[j].first, Poly::term(A.scope(), Rat(1), cands[j].second));
    SimplexForm de = e.total_d(A);
    for (auto& [k, c] : de.terms())
      for (auto& [m, q] : c.terms()) cols[j][row_of(k, m)] = q;
  }
  std::map<std::size_t, Rat> rhs;
  for (auto& [k, c] : target.terms())
    for (auto& [m, q] : c.terms()) rhs[row_of(k, m)] = q;

  QMat M(rows.size(), cands.size());
  for (std::size_t j = 0; j < cands.size(); ++j)
    for (auto& [i, q] : cols[j]) M.add(i, j, q);
  QVec b(rows.size(), Rat(0));
  for (auto& [i, q] : rhs) b[i] = q;

  auto out = solve(M, b);
  if (!out.solution) return std::nullopt;
  SimplexForm theta(ell);
  for (std::size_t j = 0; j < cands.size(); ++j)
    if ((*out.solution)[j] != 0)
      theta.add_term(cands[j].first,
                     Poly::term(A.scope(), (*out.solution)[j], cands[j].second));
  return theta;
}

// Fill a horn: given a closed form vanishing on every face except `missing`,
// produce theta with d(theta) = eta vanishing on the same faces. The
// postconditions are re-checked exactly.
inline SimplexForm horn_fill(const ResolvingAlgebra& A, const SimplexForm& eta, int missing) {
  int ell = eta.ell();
  if (ell < 1) throw std::invalid_argument("horn filling needs a positive simplex dimension");
  if (missing < 0 || missing > ell) throw std::invalid_argument("horn index out of range");
  if (!eta.total_d(A).is_zero())
    throw std::invalid_argument("horn filling needs a closed form");
  for (int i = 0; i <= ell; ++i)
    if (i != missing && !eta.face(i).is_zero())
      throw std::invalid_argument("the form does not vanish on the horn");
  if (eta.is_zero()) return SimplexForm(ell);

  SimplexForm work = missing == 0 ? eta : eta.swap_vertex(missing);
  std::uint32_t ecap = 1;
  for (auto& [k, c] : work.terms())
    for (auto& [m, q] : c.terms()) {
      std::uint32_t total = 0;
      for (auto& [g, e] : m.entries()) total += e;
      ecap = std::max(ecap, total);
    }
  std::uint32_t tcap = work.t_degree() + 1;
  ecap += 1;

  std::optional<SimplexForm> theta0;
  std::uint32_t tc = tcap, ec = ecap;
  for (int round = 0; round < 3 && !theta0; ++round, tc *= 2, ec *= 2)
    theta0 = bounded_form_solve(A, work, tc, ec);
  if (!theta0)
    throw SolveFailure("horn filling: no primitive up to t-degree cap " +
                       std::to_string(tc / 2));

  SimplexForm th = *theta0;
  for (int i = 1; i <= ell; ++i) th = th - th.restrict_zero(i);
  if (missing != 0) th = th.swap_vertex(missing);

  if (!(th.total_d(A) == eta))
    throw std::logic_error("horn filling postcondition failed: d(theta) != eta");
  for (int i = 0; i <= ell; ++i)
    if (i != missing && !th.face(i).is_zero())
      throw std::logic_error("horn filling postcondition failed: theta on the horn");
  return th;
}

// Extrapolate a form that vanishes on the whole boundary of the (l-1)-simplex
// to the l-simplex: the last face restricts back to the input and the
// opposite horn carries zero. Both facts are re-checked exactly.
inline SimplexForm extend_from_face(const ResolvingAlgebra& A, const SimplexForm& psi) {
  int m = psi.ell();
  int ell = m + 1;
  for (int i = 0; i <= m && m >= 1; ++i)
    if (!psi.face(i).is_zero())
      throw std::invalid_argument("extrapolation needs a form vanishing on the whole boundary");

  // substitute t_j -> t_j/(1 - t_l) with u a formal inverse of (1 - t_l):
  // t_j picks up u, dt_j becomes u dt_j + t_j u^2 dt_l
  struct UKey {
    FormKey k;
    std::uint32_t u = 0;
    bool operator<(const UKey& o) const {
      if (u != o.u) return u < o.u;
      return k < o.k;
    }
  };
  std::map<UKey, Poly> acc;
  for (auto& [k, c] : psi.terms()) {
    std::map<UKey, Poly> cur;
    UKey start{FormKey{std::vector<std::uint32_t>(static_cast<std::size_t>(ell), 0), 0}, 0};
    for (std::size_t j = 0; j < k.t.size(); ++j) {
      start.k.t[j] = k.t[j];
      start.u += k.t[j];
    }
    cur.emplace(std::move(start), c);
    for (int j = 1; j <= m; ++j) {
      if (!(k.dt & (1u << (j - 1)))) continue;
      std::map<UKey, Poly> next;
      for (auto& [uk, cc] : cur) {
        // append u dt_j
        if (!(uk.k.dt & (1u << (j - 1)))) {
          UKey a = uk;
          a.u += 1;
          a.k.dt |= 1u << (j - 1);
          int sign = std::popcount(uk.k.dt & ~((1u << j) - 1)) % 2 == 0 ? 1 : -1;
          auto& slot = next[a];
          slot += sign < 0 ? -cc : cc;
          if (slot.is_zero()) next.erase(a);
        }
        // append t_j u^2 dt_l
        if (!(uk.k.dt & (1u << (ell - 1)))) {
          UKey b = uk;
          b.u += 2;
          b.k.t[static_cast<std::size_t>(j - 1)] += 1;
          b.k.dt |= 1u << (ell - 1);
          auto& slot = next[b];
          slot += cc;  // dt_l merges past everything below it with no swaps
          if (slot.is_zero()) next.erase(b);
        }
      }
      cur = std::move(next);
    }
    for (auto& [uk, cc] : cur) {
      auto& slot = acc[uk];
      slot += cc;
      if (slot.is_zero()) acc.erase(uk);
    }
  }

  std::uint32_t K = 0;
  for (auto& [uk, cc] : acc) K = std::max(K, uk.u);
  SimplexForm out(ell);
  SimplexForm onemt = SimplexForm::constant(ell, Poly(1)) - SimplexForm::coord(ell, ell);
  for (auto& [uk, cc] : acc) {
    SimplexForm piece(ell);
    piece.add_term(uk.k, cc);
    out = out + piece * onemt.pow(K + 1 - uk.u);
  }

  if (!(out.face(ell) == psi))
    throw std::logic_error("extrapolation postcondition failed on the opposite face");
  for (int i = 0; i < ell; ++i)
    if (!out.face(i).is_zero())
      throw std::logic_error("extrapolation postcondition failed on the horn");
  return out;
}

// The canonical normalized representative of a closed coefficient: the
// rescaled volume block on the l-simplex.
inline SimplexForm normalized_class(const ResolvingAlgebra& A, const Poly& a, int ell) {
  if (!A.d(a).is_zero())
    throw std::invalid_argument("normalized representatives need a closed coefficient");
  SimplexForm r = omega_form(ell) * SimplexForm::constant(ell, a);
  if ((ell * (ell - 1) / 2) % 2 != 0) r = -r;
  return r;
}

// Witness that shifting the coefficient by a coboundary only moves the
// normalized representative by a simplicial boundary: the returned form is
// closed, vanishes on faces 0..l, and its signed last face is omega_l db.
inline SimplexForm normalized_shift_witness(const ResolvingAlgebra& A, const Poly& b, int ell) {
  Poly db = A.d(b);
  SimplexForm psi = sigma_form(ell + 1) * SimplexForm::constant(ell + 1, db);
  SimplexForm tail = omega_form(ell + 1) * SimplexForm::constant(ell + 1, b);
  psi = (ell % 2 != 0) ? psi - tail : psi + tail;
  if (!psi.total_d(A).is_zero())
    throw std::logic_error("boundary witness is not closed");
  for (int i = 0; i <= ell; ++i)
    if (!psi.face(i).is_zero())
      throw std::logic_error("boundary witness is not normalized");
  SimplexForm last = psi.face(ell + 1);
  if ((ell + 1) % 2 != 0) last = -last;
  if (!(last == omega_form(ell) * SimplexForm::constant(ell, db)))
    throw std::logic_error("boundary witness has the wrong last face");
  return psi;
}

}  // namespace dgres
