#pragma once

// Finitely generated free DG modules over a resolving algebra: shifts, cones,
// module morphisms, Kaehler differentials with the universal derivation, base
// change along an algebra morphism, and fibers at rational points.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/derivation.hpp"
#include "dgres/linalg.hpp"
#include "dgres/poly.hpp"

namespace dgres {

struct ModBasisElt {
  std::string name;
  int degree = 0;
  int weight = 0;
};

// Elements are left-coefficient rows over the module basis: sum_i p_i * m_i.
// The differential follows d(p m) = (dp) m + (-1)^{deg p} p (d m).
class FreeDGModule {
 public:
  using Elt = std::vector<Poly>;

  FreeDGModule(ResolvingAlgebra alg, std::vector<ModBasisElt> basis)
      : alg_(std::move(alg)), basis_(std::move(basis)), d_(basis_.size()) {
    for (auto& v : d_) v.assign(basis_.size(), Poly());
  }

  const ResolvingAlgebra& algebra() const { return alg_; }
  std::size_t rank() const { return basis_.size(); }
  const ModBasisElt& basis(std::size_t i) const { return basis_[i]; }
  const Elt& d_basis(std::size_t i) const { return d_[i]; }

  void set_d(std::size_t i, Elt value) {
    if (value.size() != basis_.size())
      throw std::invalid_argument("module differential has the wrong width");
    d_[i] = std::move(value);
  }

  Elt zero() const { return Elt(basis_.size(), Poly()); }

  Elt basis_elt(std::size_t i) const {
    Elt e = zero();
    e[i] = Poly(1);
    return e;
  }

  Elt add(Elt a, const Elt& b) const {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  }

  Elt scale(const Poly& p, Elt a) const {
    for (auto& x : a) x = p * x;
    return a;
  }

  bool is_zero(const Elt& a) const {
    for (auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }

  // Homogeneous of module degree n iff coefficient i is homogeneous of degree
  // n - deg(m_i).
  bool is_homogeneous_of(const Elt& a, int n) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      if (!a[i].is_homogeneous()) return false;
      if (*a[i].hom_degree() != n - basis_[i].degree) return false;
    }
    return true;
  }

  Elt d(const Elt& a) const {
    Elt out = zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      out[i] += alg_.d(a[i]);
      for (auto& [deg, comp] : a[i].by_degree()) {
        Poly signed_comp = (deg % 2 == 0) ? comp : -comp;
        for (std::size_t j = 0; j < basis_.size(); ++j) {
          const Poly& v = d_[i][j];
          if (!v.is_zero()) out[j] += signed_comp * v;
        }
      }
    }
    return out;
  }

  ValidationReport validate() const {
    ValidationReport rep;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (!is_homogeneous_of(d_[i], basis_[i].degree + 1))
        rep.fail("d(" + basis_[i].name + ") is not homogeneous of degree " +
                 std::to_string(basis_[i].degree + 1));
      if (!is_zero(d(d_[i]))) rep.fail("d^2 != 0 on module element " + basis_[i].name);
    }
    return rep;
  }

  FreeDGModule shift() const {
    std::vector<ModBasisElt> b;
    for (auto& e : basis_) b.push_back({e.name + "[1]", e.degree - 1, e.weight});
    FreeDGModule M(alg_, std::move(b));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      Elt v = d_[i];
      for (auto& p : v) p = -p;
      M.set_d(i, std::move(v));
    }
    return M;
  }

 private:
  ResolvingAlgebra alg_;
  std::vector<ModBasisElt> basis_;
  std::vector<Elt> d_;
};

// Degree-0 morphism of modules over one algebra: values per source basis
// element, extended by linearity without signs.
struct ModMorphism {
  const FreeDGModule* src = nullptr;
  const FreeDGModule* dst = nullptr;
  std::vector<FreeDGModule::Elt> val;

  FreeDGModule::Elt apply(const FreeDGModule::Elt& a) const {
    FreeDGModule::Elt out = dst->zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < out.size(); ++j)
        if (!val[i][j].is_zero()) out[j] += a[i] * val[i][j];
    }
    return out;
  }

  ValidationReport validate() const {
    ValidationReport rep;
    if (val.size() != src->rank()) {
      rep.fail("morphism value count does not match the source rank");
      return rep;
    }
    for (std::size_t i = 0; i < src->rank(); ++i) {
      if (!dst->is_homogeneous_of(val[i], src->basis(i).degree))
        rep.fail("image of " + src->basis(i).name + " is not homogeneous of its degree");
      auto lhs = dst->d(val[i]);
      auto rhs = apply(src->d_basis(i));
      for (std::size_t j = 0; j < lhs.size(); ++j)
        if (lhs[j] != rhs[j]) {
          rep.fail("chain condition fails on module element " + src->basis(i).name);
          break;
        }
    }
    return rep;
  }
};

// Mapping cone: target plus shifted source, with the morphism feeding the
// source copy into the target.
inline FreeDGModule cone(const ModMorphism& phi) {
  const FreeDGModule& M = *phi.src;
  const FreeDGModule& N = *phi.dst;
  std::vector<ModBasisElt> b;
  for (std::size_t j = 0; j < N.rank(); ++j) b.push_back(N.basis(j));
  for (std::size_t i = 0; i < M.rank(); ++i)
    b.push_back({M.basis(i).name + "[1]", M.basis(i).degree - 1, M.basis(i).weight});
  FreeDGModule C(N.algebra(), std::move(b));
  const std::size_t nN = N.rank();
  for (std::size_t j = 0; j < nN; ++j) {
    auto v = C.zero();
    for (std::size_t k = 0; k < nN; ++k) v[k] = N.d_basis(j)[k];
    C.set_d(j, std::move(v));
  }
  for (std::size_t i = 0; i < M.rank(); ++i) {
    auto v = C.zero();
    for (std::size_t k = 0; k < nN; ++k) v[k] = phi.val[i][k];
    for (std::size_t k = 0; k < M.rank(); ++k) v[nN + k] = -M.d_basis(i)[k];
    C.set_d(nN + i, std::move(v));
  }
  return C;
}

// ---------------------------------------------------------------------------
// Kaehler differentials relative to the algebra's base prefix: one basis
// element D<x> per non-base generator, with d(D x) = D(d x) through the
// universal degree-0 derivation that kills the base.

struct Kaehler {
  FreeDGModule omega;
  std::vector<GenId> gens;             // slot -> generator
  std::map<GenId, std::size_t> slot;   // generator -> slot

  // The universal derivation A -> Omega.
  FreeDGModule::Elt D(const Poly& p) const {
    FreeDGModule::Elt out = omega.zero();
    if (!p.scope()) return out;
    const Scope& sc = *p.scope();
    for (auto& [m, c] : p.terms()) {
      const Rat& cc = c;
      leibniz_terms(sc, m, 0, [&](const Rat& k, const Monomial& struck, GenId g) {
        auto it = slot.find(g);
        if (it == slot.end()) return;  // base generator: D kills it
        out[it->second] += Poly::term(p.scope(), cc * k, struck);
      });
    }
    return out;
  }
};

inline Kaehler kaehler(const ResolvingAlgebra& A) {
  Kaehler K{FreeDGModule(A, {}), {}, {}};
  std::vector<ModBasisElt> b;
  for (GenId g = static_cast<GenId>(A.base_count()); g < A.ngens(); ++g) {
    K.slot[g] = b.size();
    K.gens.push_back(g);
    b.push_back({"D" + A.gen(g).name, A.gen(g).degree, A.gen(g).weight});
  }
  K.omega = FreeDGModule(A, std::move(b));
  for (std::size_t i = 0; i < K.gens.size(); ++i)
    K.omega.set_d(i, K.D(A.d_gen(K.gens[i])));
  return K;
}

// Omega_A (x)_A B along f : A -> B: same basis, coefficients pushed through f.
inline FreeDGModule base_change(const Kaehler& KA, const DGAMorphism& f) {
  std::vector<ModBasisElt> b;
  for (std::size_t i = 0; i < KA.omega.rank(); ++i) b.push_back(KA.omega.basis(i));
  FreeDGModule M(f.dst, std::move(b));
  for (std::size_t i = 0; i < KA.omega.rank(); ++i) {
    auto v = M.zero();
    for (std::size_t j = 0; j < KA.omega.rank(); ++j) v[j] = f.apply(KA.omega.d_basis(i)[j]);
    M.set_d(i, std::move(v));
  }
  return M;
}

// Everything needed to study the relative cotangent complex of f : A -> B:
// the cone of  Omega_A (x)_A B  ->  Omega_B,  D a_j -> D(f(a_j)).
struct CotangentComplex {
  Kaehler ka;              // over A
  Kaehler kb;              // over B
  FreeDGModule pulled;     // Omega_A (x)_A B
  FreeDGModule cone_mod;   // the cotangent complex itself
  std::vector<FreeDGModule::Elt> comparison;  // images of D a_j in Omega_B
};

inline CotangentComplex cotangent_complex(const DGAMorphism& f) {
  CotangentComplex out{kaehler(f.src), kaehler(f.dst), FreeDGModule(f.dst, {}),
                       FreeDGModule(f.dst, {}), {}};
  out.pulled = base_change(out.ka, f);
  for (std::size_t i = 0; i < out.ka.gens.size(); ++i)
    out.comparison.push_back(out.kb.D(f.val[out.ka.gens[i]]));
  ModMorphism phi{&out.pulled, &out.kb.omega, out.comparison};
  out.cone_mod = cone(phi);
  return out;
}

// ---------------------------------------------------------------------------
// Fiber of a free module at a rational point: coefficients evaluated at the
// point, producing a finite complex of vector spaces with slot bookkeeping.

struct FiberComplex {
  FiniteComplex C;
  std::vector<std::vector<std::size_t>> slots;  // per degree in [C.lo, hi]
};

inline FiberComplex fiber_at(const FreeDGModule& M, const Augmentation& eps) {
  FiberComplex out;
  if (M.rank() == 0) {
    out.C.lo = 0;
    out.C.dims = {0};
    return out;
  }
  int lo = M.basis(0).degree, hi = M.basis(0).degree;
  for (std::size_t i = 0; i < M.rank(); ++i) {
    lo = std::min(lo, M.basis(i).degree);
    hi = std::max(hi, M.basis(i).degree);
  }
  out.C.lo = lo;
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < M.rank(); ++i)
      if (M.basis(i).degree == d) s.push_back(i);
    out.slots.push_back(std::move(s));
    out.C.dims.push_back(out.slots.back().size());
  }
  for (int d = lo; d < hi; ++d) {
    const auto& src = out.slots[static_cast<std::size_t>(d - lo)];
    const auto& dst = out.slots[static_cast<std::size_t>(d - lo + 1)];
    QMat mat(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      const auto& row = M.d_basis(src[j]);
      for (std::size_t i = 0; i < dst.size(); ++i) {
        const Poly& c = row[dst[i]];
        if (c.is_zero()) continue;
        Rat v = eps.ev(c);
        if (v != 0) mat.add(i, j, v);
      }
    }
    out.C.maps.push_back(std::move(mat));
  }
  return out;
}

}  // namespace dgres
