#pragma once

// Commutative Groebner machinery for degree-0 subrings: Buchberger with the
// normal selection strategy, block elimination orders, unit inverses, and
// presentations of the degree-0 cohomology ring.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/poly.hpp"
#include "dgres/rational.hpp"

namespace dgres::gb {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Caps {
  std::size_t max_vars = 12;
  std::uint32_t max_degree = 20;
  std::size_t max_basis = 256;
};

// Exponent vector over a fixed variable count.
using CMono = std::vector<std::uint32_t>;

inline std::uint32_t total(const CMono& m) {
  std::uint32_t s = 0;
  for (auto e : m) s += e;
  return s;
}

inline bool divides(const CMono& a, const CMono& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline CMono mono_mul(const CMono& a, const CMono& b) {
  CMono r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline CMono mono_div(const CMono& a, const CMono& b) {
  CMono r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline CMono mono_lcm(const CMono& a, const CMono& b) {
  CMono r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline bool coprime(const CMono& a, const CMono& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

struct MonOrder {
  enum class Kind { GrevLex, Lex, Block };
  Kind kind = Kind::GrevLex;
  std::size_t block = 0;  // leading variable block for Kind::Block (eliminated first)

  static MonOrder grevlex() { return {}; }
  static MonOrder lex() { return {Kind::Lex, 0}; }
  static MonOrder elim_block(std::size_t leading_vars) { return {Kind::Block, leading_vars}; }

  // grevlex on the half-open variable slice [lo, hi)
  static int cmp_grevlex(const CMono& a, const CMono& b, std::size_t lo, std::size_t hi) {
    std::int64_t da = 0, db = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = hi; i-- > lo;)
      if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    return 0;
  }

  int cmp(const CMono& a, const CMono& b) const {
    switch (kind) {
      case Kind::GrevLex:
        return cmp_grevlex(a, b, 0, a.size());
      case Kind::Lex:
        for (std::size_t i = 0; i < a.size(); ++i)
          if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
      case Kind::Block: {
        int c = cmp_grevlex(a, b, 0, block);
        if (c != 0) return c;
        return cmp_grevlex(a, b, block, a.size());
      }
    }
    return 0;
  }
  bool less(const CMono& a, const CMono& b) const { return cmp(a, b) < 0; }
};

// Order-free storage for a commutative polynomial.
using CPolyData = std::vector<std::pair<CMono, Rat>>;

class CPoly {
 public:
  struct Cmp {
    MonOrder ord;
    bool operator()(const CMono& a, const CMono& b) const { return ord.less(a, b); }
  };
  using Map = std::map<CMono, Rat, Cmp>;

  explicit CPoly(MonOrder ord) : terms_(Cmp{ord}) {}
  CPoly(MonOrder ord, const CPolyData& data) : terms_(Cmp{ord}) {
    for (auto& [m, c] : data) add(m, c);
  }

  void add(const CMono& m, const Rat& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(m, c);
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }

  const CMono& lt() const { return terms_.rbegin()->first; }
  const Rat& lc() const { return terms_.rbegin()->second; }

  std::uint32_t max_total_degree() const {
    std::uint32_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, total(m));
    return d;
  }

  void scale(const Rat& c) {
    if (c == 0) {
      terms_.clear();
      return;
    }
    for (auto& [m, v] : terms_) v *= c;
  }

  // this -= c * x^q * f
  void axpy(const Rat& c, const CMono& q, const CPoly& f) {
    for (auto& [m, v] : f.terms_) add(mono_mul(q, m), Rat(-c * v));
  }

  CPolyData data() const {
    CPolyData out;
    for (auto& [m, c] : terms_) out.emplace_back(m, c);
    return out;
  }

  bool operator==(const CPoly& o) const {
    return data() == o.data();
  }

 private:
  Map terms_;
};

inline CPoly cpoly_one(MonOrder ord, std::size_t nvars) {
  CPoly p(ord);
  p.add(CMono(nvars, 0), Rat(1));
  return p;
}

inline CPolyData cmul(const CPolyData& a, const CPolyData& b, std::size_t nvars) {
  CPoly acc(MonOrder::grevlex());
  for (auto& [ma, ca] : a)
    for (auto& [mb, cb] : b) acc.add(mono_mul(ma, mb), Rat(ca * cb));
  (void)nvars;
  return acc.data();
}

class GroebnerBasis {
 public:
  GroebnerBasis(MonOrder ord, std::size_t nvars, std::vector<CPoly> elems)
      : ord_(ord), nvars_(nvars), elems_(std::move(elems)) {}

  const MonOrder& order() const { return ord_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<CPoly>& elems() const { return elems_; }

  CPoly normal_form(CPoly p) const {
    CPoly rem(ord_);
    while (!p.empty()) {
      const CMono& m = p.lt();
      Rat c = p.lc();
      bool hit = false;
      for (const auto& f : elems_) {
        if (divides(f.lt(), m)) {
          p.axpy(Rat(c / f.lc()), mono_div(m, f.lt()), f);
          hit = true;
          break;
        }
      }
      if (!hit) {
        rem.add(m, c);
        p.add(m, Rat(-c));
      }
    }
    return rem;
  }

  bool contains(const CPoly& p) const { return normal_form(p).empty(); }
  bool contains_one() const {
    return !elems_.empty() && elems_.size() == 1 && total(elems_[0].lt()) == 0;
  }

 private:
  MonOrder ord_;
  std::size_t nvars_;
  std::vector<CPoly> elems_;
};

inline GroebnerBasis groebner(std::size_t nvars, const std::vector<CPolyData>& gens,
                              MonOrder ord = MonOrder::grevlex(), Caps caps = {}) {
  if (nvars > caps.max_vars)
    throw ResourceError("groebner: " + std::to_string(nvars) + " variables exceeds cap");

  std::vector<CPoly> basis;
  for (auto& g : gens) {
    CPoly p(ord, g);
    if (p.empty()) continue;
    if (p.max_total_degree() > caps.max_degree)
      throw ResourceError("groebner: input degree exceeds cap");
    basis.push_back(std::move(p));
  }

  struct Pair {
    CMono lcm;
    std::size_t i, j;
  };
  auto pair_less = [&ord](const Pair& a, const Pair& b) {
    int c = ord.cmp(a.lcm, b.lcm);
    if (c != 0) return c < 0;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  };
  std::multiset<Pair, decltype(pair_less)> pairs(pair_less);
  auto push_pairs = [&](std::size_t k) {
    for (std::size_t i = 0; i < k; ++i)
      pairs.insert({mono_lcm(basis[i].lt(), basis[k].lt()), i, k});
  };
  for (std::size_t k = 1; k < basis.size(); ++k) push_pairs(k);

  auto reduce_mod_basis = [&](CPoly p) {
    CPoly rem(ord);
    while (!p.empty()) {
      const CMono& m = p.lt();
      Rat c = p.lc();
      bool hit = false;
      for (const auto& f : basis) {
        if (divides(f.lt(), m)) {
          p.axpy(Rat(c / f.lc()), mono_div(m, f.lt()), f);
          hit = true;
          break;
        }
      }
      if (!hit) {
        rem.add(m, c);
        p.add(m, Rat(-c));
      }
    }
    return rem;
  };

  while (!pairs.empty()) {
    Pair pr = *pairs.begin();
    pairs.erase(pairs.begin());
    const CPoly& f = basis[pr.i];
    const CPoly& g = basis[pr.j];
    if (coprime(f.lt(), g.lt())) continue;  // Buchberger's first criterion
    if (total(pr.lcm) > caps.max_degree)
      throw ResourceError("groebner: s-polynomial degree exceeds cap");
    CPoly s(ord);
    s.axpy(Rat(-1 / f.lc()), mono_div(pr.lcm, f.lt()), f);
    s.axpy(Rat(1 / g.lc()), mono_div(pr.lcm, g.lt()), g);
    CPoly r = reduce_mod_basis(std::move(s));
    if (r.empty()) continue;
    if (r.max_total_degree() > caps.max_degree)
      throw ResourceError("groebner: basis degree exceeds cap");
    basis.push_back(std::move(r));
    if (basis.size() > caps.max_basis) throw ResourceError("groebner: basis size exceeds cap");
    push_pairs(basis.size() - 1);
  }

  // Autoreduce to the unique reduced basis: minimal leading terms, fully
  // reduced tails, monic, sorted by leading term.
  // Drop elements whose leading term is divisible by another's.
  std::vector<CPoly> minimal;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      if (divides(basis[j].lt(), basis[i].lt()) &&
          !(basis[i].lt() == basis[j].lt() && j > i))
        redundant = true;
    }
    if (!redundant) minimal.push_back(basis[i]);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      std::vector<CPoly> others;
      for (std::size_t j = 0; j < minimal.size(); ++j)
        if (j != i) others.push_back(minimal[j]);
      GroebnerBasis tmp(ord, nvars, std::move(others));
      CPoly r = tmp.normal_form(minimal[i]);
      if (!(r == minimal[i])) {
        changed = true;
        if (r.empty()) {
          minimal.erase(minimal.begin() + static_cast<std::ptrdiff_t>(i));
          --i;
        } else {
          minimal[i] = std::move(r);
        }
      }
    }
  }
  for (auto& p : minimal) p.scale(Rat(1 / p.lc()));
  std::sort(minimal.begin(), minimal.end(),
            [&ord](const CPoly& a, const CPoly& b) { return ord.less(a.lt(), b.lt()); });
  return GroebnerBasis(ord, nvars, std::move(minimal));
}

// ---------------------------------------------------------------------------
// Bridge between graded polynomials (degree-0 part) and exponent vectors.

struct VarMap {
  ScopePtr scope;
  std::vector<GenId> vars;          // variable index -> generator
  std::map<GenId, std::size_t> at;  // generator -> variable index

  static VarMap over(const ScopePtr& sc, std::vector<GenId> gens) {
    VarMap vm;
    vm.scope = sc;
    vm.vars = std::move(gens);
    for (std::size_t i = 0; i < vm.vars.size(); ++i) vm.at[vm.vars[i]] = i;
    return vm;
  }
  std::size_t size() const { return vars.size(); }
};

inline CPolyData to_cpoly(const Poly& p, const VarMap& vm) {
  CPolyData out;
  for (auto& [m, c] : p.terms()) {
    CMono e(vm.size(), 0);
    for (auto& [g, k] : m.entries()) {
      auto it = vm.at.find(g);
      if (it == vm.at.end())
        throw std::invalid_argument("to_cpoly: generator outside variable map: " +
                                    (*vm.scope)[g].name);
      e[it->second] = k;
    }
    out.emplace_back(std::move(e), c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Poly from_cpoly(const CPolyData& d, const VarMap& vm) {
  Poly out;
  for (auto& [e, c] : d) {
    Poly term(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k)
        term = term * Poly::generator(vm.scope, vm.vars[i]);
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unit test modulo an ideal: g is a unit in Q[x]/I iff 1 lies in I + (g).
// The inverse witness comes from an elimination order with a fresh variable t
// ranked above everything: reduce t modulo I + (g t - 1).

struct UnitCheck {
  bool unit = false;
  CPolyData inverse;  // empty unless unit
};

inline UnitCheck unit_mod(std::size_t nvars, const std::vector<CPolyData>& ideal,
                          const CPolyData& g, Caps caps = {}) {
  std::vector<CPolyData> with_g = ideal;
  with_g.push_back(g);
  GroebnerBasis memb = groebner(nvars, with_g, MonOrder::grevlex(), caps);
  CPoly one = cpoly_one(memb.order(), nvars);
  if (!memb.contains(one)) return {};

  // 1 in I alone: the quotient ring is zero, any element inverts to 0.
  GroebnerBasis base = groebner(nvars, ideal, MonOrder::grevlex(), caps);
  if (base.contains(cpoly_one(base.order(), nvars))) {
    return {true, {}};
  }

  // Fresh variable t in slot 0, original variables shifted by one.
  auto lift = [&](const CPolyData& p, std::uint32_t textra) {
    CPolyData out;
    for (auto& [m, c] : p) {
      CMono e(nvars + 1, 0);
      e[0] = textra;
      for (std::size_t i = 0; i < nvars; ++i) e[i + 1] = m[i];
      out.emplace_back(std::move(e), c);
    }
    return out;
  };
  std::vector<CPolyData> egens;
  for (auto& p : ideal) egens.push_back(lift(p, 0));
  CPolyData rel = lift(g, 1);  // g*t
  CMono one_m(nvars + 1, 0);
  rel.emplace_back(one_m, Rat(-1));  // g*t - 1
  std::sort(rel.begin(), rel.end());
  egens.push_back(std::move(rel));

  Caps ecaps = caps;
  ecaps.max_vars = caps.max_vars + 1;
  GroebnerBasis elim = groebner(nvars + 1, egens, MonOrder::elim_block(1), ecaps);
  CPoly t(elim.order());
  CMono tm(nvars + 1, 0);
  tm[0] = 1;
  t.add(tm, Rat(1));
  CPoly inv = elim.normal_form(std::move(t));
  CPolyData inv_data;
  for (auto& [m, c] : inv.terms()) {
    if (m[0] != 0)
      throw std::logic_error("unit_mod: inverse witness still mentions the elimination variable");
    CMono e(m.begin() + 1, m.end());
    inv_data.emplace_back(std::move(e), c);
  }
  std::sort(inv_data.begin(), inv_data.end());

  // Re-verify: g * inverse == 1 modulo I.
  CPolyData prod = cmul(g, inv_data, nvars);
  CPoly check(base.order(), prod);
  CPoly nf = base.normal_form(std::move(check));
  CPoly expect = cpoly_one(base.order(), nvars);
  if (!(nf == expect)) throw std::logic_error("unit_mod: inverse witness failed verification");
  return {true, std::move(inv_data)};
}

// ---------------------------------------------------------------------------
// Presentation of h^0: the degree-0 generators modulo the images of the
// degree -1 generators under d.

struct H0Presentation {
  VarMap vm;
  std::vector<CPolyData> relations;
};

inline H0Presentation h0_presentation(const ResolvingAlgebra& A) {
  H0Presentation out;
  out.vm = VarMap::over(A.scope(), A.degree0_gens());
  for (GenId g = 0; g < A.ngens(); ++g) {
    if (A.gen(g).degree != -1) continue;
    const Poly& v = A.d_gen(g);
    if (!v.is_zero()) out.relations.push_back(to_cpoly(v, out.vm));
  }
  return out;
}

// Does f induce an isomorphism on degree-0 cohomology rings?  Surjectivity:
// every target variable reduces to a source-only expression modulo the graph
// ideal under an elimination order.  Injectivity: the contraction of the graph
// ideal to source variables lies inside the source relations.
struct H0Compare {
  bool surjective = true;
  bool injective = true;
  std::vector<std::string> notes;
  bool iso() const { return surjective && injective; }
};

inline H0Compare h0_compare(const DGAMorphism& f, Caps caps = {}) {
  const ResolvingAlgebra& A = f.src;
  const ResolvingAlgebra& B = f.dst;
  H0Presentation pa = h0_presentation(A);
  H0Presentation pb = h0_presentation(B);
  const std::size_t nz = pb.vm.size();  // target variables, eliminated block
  const std::size_t ny = pa.vm.size();
  const std::size_t n = nz + ny;

  // combined variables: [z_1..z_nz | y_1..y_ny]
  auto lift_z = [&](const CPolyData& p) {
    CPolyData out;
    for (auto& [m, c] : p) {
      CMono e(n, 0);
      for (std::size_t i = 0; i < nz; ++i) e[i] = m[i];
      out.emplace_back(std::move(e), c);
    }
    return out;
  };

  std::vector<CPolyData> gens;
  for (auto& r : pb.relations) gens.push_back(lift_z(r));
  for (std::size_t i = 0; i < ny; ++i) {
    const Poly img = f.val[pa.vm.vars[i]];
    CPolyData graph = lift_z(to_cpoly(img, pb.vm));
    CMono ym(n, 0);
    ym[nz + i] = 1;
    graph.emplace_back(std::move(ym), Rat(-1));
    std::sort(graph.begin(), graph.end());
    gens.push_back(std::move(graph));
  }

  Caps ecaps = caps;
  ecaps.max_vars = std::max(caps.max_vars, n);
  GroebnerBasis gbJ = groebner(n, gens, MonOrder::elim_block(nz), ecaps);

  H0Compare out;
  auto z_free = [&](const CPoly& p) {
    for (auto& [m, c] : p.terms())
      for (std::size_t i = 0; i < nz; ++i)
        if (m[i] != 0) return false;
    return true;
  };

  for (std::size_t j = 0; j < nz; ++j) {
    CPoly zj(gbJ.order());
    CMono m(n, 0);
    m[j] = 1;
    zj.add(m, Rat(1));
    CPoly nf = gbJ.normal_form(std::move(zj));
    if (!z_free(nf)) {
      out.surjective = false;
      out.notes.push_back("h0: generator " + (*pb.vm.scope)[pb.vm.vars[j]].name +
                          " is not in the image");
    }
  }

  GroebnerBasis gbA =
      groebner(ny, pa.relations, MonOrder::grevlex(),
               Caps{std::max(caps.max_vars, ny), caps.max_degree, caps.max_basis});
  for (const auto& e : gbJ.elems()) {
    if (!z_free(e)) continue;
    CPolyData contracted;
    for (auto& [m, c] : e.terms()) {
      CMono ym(m.begin() + static_cast<std::ptrdiff_t>(nz), m.end());
      contracted.emplace_back(std::move(ym), c);
    }
    CPoly cand(gbA.order(), contracted);
    if (!gbA.contains(cand)) {
      out.injective = false;
      out.notes.push_back("h0: kernel witness found in the source ring");
      break;
    }
  }
  return out;
}

}  // namespace dgres::gb
