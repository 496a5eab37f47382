#pragma once

// Linearization of mapping-space homotopy: the passage between derivation
// cohomology and explicit simplex-valued morphisms. Builds the xi maps, the
// homotopy and concatenation witnesses, the boundary lift, the pi_0
// obstruction classes, and the transport of derivation cohomology along a
// homotopy of base points.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/cohomology.hpp"
#include "dgres/der.hpp"
#include "dgres/derivation.hpp"
#include "dgres/linalg.hpp"
#include "dgres/simplex.hpp"

namespace dgres {

// Applies a derivation with SimplexForm values, coefficients pushed through a
// form-valued ring map (the module structure through a simplex morphism).
template <class ValueFn, class PushFn>
SimplexForm apply_form_derivation(const Poly& p, int deg_op, ValueFn&& value, PushFn&& push,
                                  int ell) {
  SimplexForm r(ell);
  if (!p.scope()) return r;
  const Scope& sc = *p.scope();
  for (auto& [m, c0] : p.terms()) {
    const Rat& c = c0;
    leibniz_terms(sc, m, deg_op, [&](const Rat& k, const Monomial& struck, GenId g) {
      const SimplexForm* v = value(g);
      if (v == nullptr || v->is_zero()) return;
      SimplexForm coeff = push(struck);
      if (coeff.is_zero()) return;
      r = r + (coeff * *v).scaled(c * k);
    });
  }
  return r;
}

namespace detail {

inline int half_turn_sign(int ell) { return (ell * (ell - 1) / 2) % 2 == 0 ? 1 : -1; }

inline void require_valid(const Derivation& D, const char* who) {
  auto rep = D.validate();
  if (!rep.ok) throw std::invalid_argument(std::string(who) + ": " + rep.violations.front());
}

inline void require_cocycle(const Derivation& D, const char* who) {
  for (auto& v : D.differential().val)
    if (!v.is_zero()) throw std::invalid_argument(std::string(who) + ": derivation is not closed");
}

inline void require_shared_setting(const Derivation& a, const Derivation& b, const char* who) {
  if (a.B != b.B || a.A != b.A || a.P != b.P)
    throw std::invalid_argument(std::string(who) + ": derivations live over different data");
}

// True when p only involves generators with id < bound.
inline bool within_prefix(const Poly& p, std::size_t bound) {
  for (auto& [m, c] : p.terms())
    for (auto& [g, e] : m.entries())
      if (static_cast<std::size_t>(g) >= bound) return false;
  return true;
}

// The generator prefix [0, bound) must form a differential subalgebra.
inline void require_prefix_closed(const ResolvingAlgebra& B, std::size_t bound, const char* who) {
  if (bound < B.base_count() || bound > B.ngens())
    throw std::invalid_argument(std::string(who) + ": subalgebra prefix out of range");
  for (GenId g = 0; g < bound; ++g)
    if (!within_prefix(B.d_gen(g), bound))
      throw std::invalid_argument(std::string(who) +
                                  ": the generator prefix is not closed under d");
}

}  // namespace detail

inline Derivation derivation_sum(const Derivation& a, const Derivation& b) {
  detail::require_shared_setting(a, b, "derivation_sum");
  if (a.n != b.n) throw std::invalid_argument("derivation_sum: degrees differ");
  Derivation r{a.B, a.A, a.P, a.n, {}};
  r.val.reserve(a.val.size());
  for (std::size_t g = 0; g < a.val.size(); ++g) r.val.push_back(a.val[g] + b.val[g]);
  return r;
}

// D (a closed derivation of degree -l, vanishing on the base) becomes the
// l-simplex P + sign * omega_l D. Every face restricts to the base point.
inline SimplexMorphism xi_ell(const Derivation& D, int ell) {
  if (ell < 1) throw std::invalid_argument("xi_ell: simplex dimension must be positive");
  if (D.n != -ell)
    throw std::invalid_argument("xi_ell: derivation degree must be minus the simplex dimension");
  detail::require_valid(D, "xi_ell");
  detail::require_cocycle(D, "xi_ell");
  const DGAMorphism& P = *D.P;
  SimplexMorphism h{*D.B, *D.A, ell, {}};
  SimplexForm omega = omega_form(ell);
  int eps = detail::half_turn_sign(ell);
  for (GenId g = 0; g < D.B->ngens(); ++g) {
    SimplexForm tail = omega * SimplexForm::constant(ell, D.val[g]);
    if (eps < 0) tail = -tail;
    h.val.push_back(SimplexForm::constant(ell, P.val[g]) + tail);
  }
  auto rep = h.validate();
  if (!rep.ok) throw std::logic_error("xi_ell: output failed validation: " + rep.violations.front());
  SimplexMorphism base = constant_simplex_morphism(P, ell - 1);
  for (int i = 0; i <= ell; ++i)
    if (!(h.face(i) == base)) throw std::logic_error("xi_ell: a face differs from the base point");
  return h;
}

// Degree-zero variant: needs every non-base generator's differential to land
// in the base, and produces an honest morphism x -> P(x) + D(x).
inline DGAMorphism xi_zero(const Derivation& D) {
  if (D.n != 0) throw std::invalid_argument("xi_zero: derivation degree must be zero");
  detail::require_valid(D, "xi_zero");
  detail::require_cocycle(D, "xi_zero");
  const ResolvingAlgebra& B = *D.B;
  for (GenId g = static_cast<GenId>(B.base_count()); g < B.ngens(); ++g)
    if (!detail::within_prefix(B.d_gen(g), B.base_count()))
      throw std::invalid_argument("xi_zero: generator differentials must land in the base");
  DGAMorphism h{B, *D.A, {}};
  for (GenId g = 0; g < B.ngens(); ++g) h.val.push_back(D.P->val[g] + D.val[g]);
  auto rep = h.validate();
  if (!rep.ok)
    throw std::logic_error("xi_zero: output failed validation: " + rep.violations.front());
  return h;
}

// Checks that theta is a path from f (the face at t=1) to g (the face at t=0).
inline ValidationReport homotopy_check(const SimplexMorphism& theta, const DGAMorphism& f,
                                       const DGAMorphism& g) {
  ValidationReport rep;
  if (theta.ell != 1) {
    rep.fail("a homotopy must be a 1-simplex");
    return rep;
  }
  auto own = theta.validate();
  for (auto& v : own.violations) rep.fail(v);
  if (!rep.ok) return rep;
  if (!(theta.face(0).as_morphism().val == f.val)) rep.fail("the endpoint at one differs");
  if (!(theta.face(1).as_morphism().val == g.val)) rep.fail("the endpoint at zero differs");
  return rep;
}

// Path between the degree-zero images of D and D + dE: at t=0 the morphism
// for D, at t=1 the one for the shifted derivation.
inline SimplexMorphism xi_zero_homotopy(const Derivation& D, const Derivation& E) {
  detail::require_shared_setting(D, E, "xi_zero_homotopy");
  if (D.n != 0 || E.n != -1)
    throw std::invalid_argument("xi_zero_homotopy: need a degree-0 derivation and a degree--1 shift");
  detail::require_valid(E, "xi_zero_homotopy");
  Derivation Dp = derivation_sum(D, E.differential());
  DGAMorphism h = xi_zero(D);
  DGAMorphism hp = xi_zero(Dp);
  const ResolvingAlgebra& B = *D.B;
  SimplexForm one = SimplexForm::constant(1, Poly(1));
  SimplexForm t = SimplexForm::coord(1, 1);
  SimplexForm dt = SimplexForm::d_coord(1, 1);
  SimplexMorphism phi{B, *D.A, 1, {}};
  for (GenId g = 0; g < B.ngens(); ++g)
    phi.val.push_back(SimplexForm::constant(1, D.P->val[g]) +
                      (one - t) * SimplexForm::constant(1, D.val[g]) +
                      t * SimplexForm::constant(1, Dp.val[g]) +
                      dt * SimplexForm::constant(1, E.val[g]));
  auto rep = homotopy_check(phi, hp, h);
  if (!rep.ok)
    throw std::logic_error("xi_zero_homotopy: witness failed: " + rep.violations.front());
  return phi;
}

// Cylinder restrictions for forms on (simplex coordinates, one interval
// coordinate): the last variable is the interval and survives every face.
inline SimplexForm prism_end(const SimplexForm& F, bool at_one) {
  int m = F.ell() - 1;
  if (m < 0) throw std::invalid_argument("prism_end: no interval coordinate");
  std::vector<SimplexForm> img;
  img.reserve(static_cast<std::size_t>(m) + 1);
  for (int j = 1; j <= m; ++j) img.push_back(SimplexForm::coord(m, j));
  img.push_back(at_one ? SimplexForm::constant(m, Poly(1)) : SimplexForm(m));
  return F.subst(m, img);
}

inline SimplexForm prism_face(const SimplexForm& F, int i) {
  int ell = F.ell() - 1;  // dimension of the simplex factor
  if (ell < 1) throw std::invalid_argument("prism_face: the simplex factor is a point");
  if (i < 0 || i > ell) throw std::invalid_argument("prism_face: face index out of range");
  int m = ell;  // output: (ell-1)-simplex coordinates plus the interval
  std::vector<SimplexForm> img;
  img.reserve(static_cast<std::size_t>(ell) + 1);
  if (i == 0) {
    SimplexForm first = SimplexForm::constant(m, Poly(1));
    for (int k = 1; k <= ell - 1; ++k) first = first - SimplexForm::coord(m, k);
    img.push_back(std::move(first));
    for (int j = 2; j <= ell; ++j) img.push_back(SimplexForm::coord(m, j - 1));
  } else {
    for (int j = 1; j <= ell; ++j) {
      if (j == i)
        img.push_back(SimplexForm(m));
      else
        img.push_back(SimplexForm::coord(m, j < i ? j : j - 1));
    }
  }
  img.push_back(SimplexForm::coord(m, m));
  return F.subst(m, img);
}

// Cylinder between xi_ell(D) and xi_ell(D + dE): constant on the boundary of
// the simplex factor, with the two ends at the two linearizations.
inline SimplexMorphism xi_homotopy_witness(const Derivation& D, const Derivation& E, int ell) {
  detail::require_shared_setting(D, E, "xi_homotopy_witness");
  if (ell < 1) throw std::invalid_argument("xi_homotopy_witness: simplex dimension must be positive");
  if (D.n != -ell || E.n != -ell - 1)
    throw std::invalid_argument("xi_homotopy_witness: derivation degrees do not match");
  detail::require_valid(E, "xi_homotopy_witness");
  Derivation Dp = derivation_sum(D, E.differential());
  SimplexMorphism end0 = xi_ell(D, ell);
  SimplexMorphism end1 = xi_ell(Dp, ell);

  const ResolvingAlgebra& B = *D.B;
  int n = ell + 1;
  SimplexForm block = omega_on(n, ell);
  SimplexForm one = SimplexForm::constant(n, Poly(1));
  SimplexForm s = SimplexForm::coord(n, n);
  SimplexForm ds = SimplexForm::d_coord(n, n);
  int eps = detail::half_turn_sign(ell);
  SimplexMorphism phi{B, *D.A, n, {}};
  for (GenId g = 0; g < B.ngens(); ++g) {
    SimplexForm mid = block * ((one - s) * SimplexForm::constant(n, D.val[g]) +
                               s * SimplexForm::constant(n, Dp.val[g]));
    SimplexForm tail = (block * ds) * SimplexForm::constant(n, E.val[g]);
    SimplexForm v = mid + tail;
    if (eps < 0) v = -v;
    phi.val.push_back(SimplexForm::constant(n, D.P->val[g]) + v);
  }
  auto rep = phi.validate();
  if (!rep.ok)
    throw std::logic_error("xi_homotopy_witness: witness failed validation: " +
                           rep.violations.front());
  for (GenId g = 0; g < B.ngens(); ++g) {
    if (!(prism_end(phi.val[g], false) == end0.val[g]) ||
        !(prism_end(phi.val[g], true) == end1.val[g]))
      throw std::logic_error("xi_homotopy_witness: an end differs from a linearization");
    for (int i = 0; i <= ell; ++i)
      if (!(prism_face(phi.val[g], i) ==
            SimplexForm::constant(ell, D.P->val[g])))
        throw std::logic_error("xi_homotopy_witness: not constant on the simplex boundary");
  }
  return phi;
}

namespace detail {

// The base point sitting at every corner of a simplex morphism.
inline DGAMorphism corner_point(const SimplexMorphism& h) {
  SimplexMorphism cur = h;
  while (cur.ell > 0) cur = cur.face(cur.ell);
  return cur.as_morphism();
}

// Inverts h = P + sign * omega_l D, recovering the derivation values; throws
// when h is not of this shape.
inline Derivation standard_form_part(const SimplexMorphism& h, const DGAMorphism& P,
                                     const Derivation& model) {
  int ell = h.ell;
  SimplexForm omega = omega_form(ell);
  int eps = half_turn_sign(ell);
  Derivation D{model.B, model.A, model.P, -ell, {}};
  std::uint32_t full = (1u << ell) - 1;
  Rat fact = detail::factorial(ell);
  for (GenId g = 0; g < h.src.ngens(); ++g) {
    SimplexForm diff = h.val[g] - SimplexForm::constant(ell, P.val[g]);
    Poly value;
    for (auto& [k, c] : diff.terms()) {
      if (k.dt != full || k.t_total() != 0)
        throw std::invalid_argument("concat_witness: input is not in standard form");
      for (auto& [deg, comp] : c.by_degree()) {
        Poly piece = comp * (Rat(1) / fact);
        if (eps < 0) piece = -piece;
        if ((ell * deg) % 2 != 0) piece = -piece;
        value += piece;
      }
    }
    D.val.push_back(std::move(value));
    SimplexForm rebuilt = omega * SimplexForm::constant(ell, D.val[g]);
    if (eps < 0) rebuilt = -rebuilt;
    if (!(rebuilt == diff))
      throw std::invalid_argument("concat_witness: input is not in standard form");
  }
  return D;
}

}  // namespace detail

struct ConcatWitness {
  SimplexMorphism phi;        // the (l+1)-simplex
  SimplexMorphism left;       // face l-1, equals the first input
  SimplexMorphism composite;  // face l, the composed loop
  SimplexMorphism right;      // face l+1, equals the second input
};

// For l >= 2: the explicit simplex composing two standard-form loops into the
// standard form of the sum of their derivations.
inline ConcatWitness concat_witness(const SimplexMorphism& h, const SimplexMorphism& hp) {
  int ell = h.ell;
  if (ell < 2)
    throw std::invalid_argument("concat_witness: needs dimension at least two (see the relative variant)");
  if (hp.ell != ell || !(h.src == hp.src) || !(h.ambient == hp.ambient))
    throw std::invalid_argument("concat_witness: the two simplices are incompatible");
  DGAMorphism P = detail::corner_point(h);
  if (!(detail::corner_point(hp).val == P.val))
    throw std::invalid_argument("concat_witness: the two simplices have different base points");
  Derivation model{&h.src, &h.ambient, &P, -ell, {}};
  Derivation D = detail::standard_form_part(h, P, model);
  Derivation Dp = detail::standard_form_part(hp, P, model);

  int n = ell + 1;
  Rat eps = detail::factorial(ell);
  if (detail::half_turn_sign(ell) < 0) eps = -eps;
  auto block = [&](std::uint32_t mask) {
    SimplexForm f(n);
    f.add_term(FormKey{std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0), mask},
               Poly(eps));
    return f;
  };
  std::uint32_t w1 = ((1u << (ell - 2)) - 1) | (1u << (ell - 1)) | (1u << ell);
  std::uint32_t w2 = ((1u << (ell - 1)) - 1) | (1u << ell);
  std::uint32_t w3 = (1u << ell) - 1;
  SimplexForm bD = block(w1) + block(w2);
  SimplexForm bDp = block(w2) + block(w3);

  SimplexMorphism phi{h.src, h.ambient, n, {}};
  for (GenId g = 0; g < h.src.ngens(); ++g)
    phi.val.push_back(SimplexForm::constant(n, P.val[g]) +
                      bD * SimplexForm::constant(n, D.val[g]) +
                      bDp * SimplexForm::constant(n, Dp.val[g]));
  auto rep = phi.validate();
  if (!rep.ok)
    throw std::logic_error("concat_witness: witness failed validation: " + rep.violations.front());

  ConcatWitness out{phi, phi.face(ell - 1), phi.face(ell), phi.face(ell + 1)};
  if (!(out.left.val == h.val) || !(out.right.val == hp.val))
    throw std::logic_error("concat_witness: outer faces differ from the inputs");
  SimplexMorphism expect = xi_ell(derivation_sum(D, Dp), ell);
  if (!(out.composite.val == expect.val))
    throw std::logic_error("concat_witness: middle face is not the composed standard form");
  SimplexMorphism base = constant_simplex_morphism(P, ell);
  for (int i = 0; i + 1 < ell; ++i)
    if (!(phi.face(i) == base))
      throw std::logic_error("concat_witness: an early face differs from the base point");
  return out;
}

// Dimension-one variant: requires a differential subalgebra prefix B' with
// the second derivation vanishing on it and all later generators having their
// differentials inside it.
inline ConcatWitness concat_witness_rel(const SimplexMorphism& h, const SimplexMorphism& hp,
                                        std::size_t split) {
  if (h.ell != 1 || hp.ell != 1)
    throw std::invalid_argument("concat_witness_rel: needs two 1-simplices");
  if (!(h.src == hp.src) || !(h.ambient == hp.ambient))
    throw std::invalid_argument("concat_witness_rel: the two simplices are incompatible");
  const ResolvingAlgebra& B = h.src;
  detail::require_prefix_closed(B, split, "concat_witness_rel");
  DGAMorphism P = detail::corner_point(h);
  if (!(detail::corner_point(hp).val == P.val))
    throw std::invalid_argument("concat_witness_rel: the two simplices have different base points");
  Derivation model{&h.src, &h.ambient, &P, -1, {}};
  Derivation D = detail::standard_form_part(h, P, model);
  Derivation Dp = detail::standard_form_part(hp, P, model);
  for (GenId g = 0; g < static_cast<GenId>(split); ++g)
    if (!Dp.val[g].is_zero())
      throw std::invalid_argument("concat_witness_rel: the second derivation must vanish on the subalgebra");
  for (GenId g = static_cast<GenId>(split); g < B.ngens(); ++g)
    if (!detail::within_prefix(B.d_gen(g), split))
      throw std::invalid_argument("concat_witness_rel: generator differentials must land in the subalgebra");

  SimplexForm dt1 = SimplexForm::d_coord(2, 1);
  SimplexForm dt2 = SimplexForm::d_coord(2, 2);
  SimplexMorphism phi{h.src, h.ambient, 2, {}};
  for (GenId g = 0; g < B.ngens(); ++g) {
    SimplexForm v = SimplexForm::constant(2, P.val[g]) +
                    dt2 * SimplexForm::constant(2, D.val[g]);
    if (g >= static_cast<GenId>(split))
      v = v + (dt2 + dt1) * SimplexForm::constant(2, Dp.val[g]);
    phi.val.push_back(std::move(v));
  }
  auto rep = phi.validate();
  if (!rep.ok)
    throw std::logic_error("concat_witness_rel: witness failed validation: " +
                           rep.violations.front());
  ConcatWitness out{phi, phi.face(0), phi.face(1), phi.face(2)};
  if (!(out.left.val == h.val) || !(out.right.val == hp.val))
    throw std::logic_error("concat_witness_rel: outer faces differ from the inputs");
  SimplexMorphism expect = xi_ell(derivation_sum(D, Dp), 1);
  if (!(out.composite.val == expect.val))
    throw std::logic_error("concat_witness_rel: middle face is not the composed standard form");
  return out;
}

struct BoundaryWitness {
  SimplexMorphism lifted;   // h' on the full algebra
  SimplexMorphism face0;    // its 0-face, the connecting image
  Derivation delta;         // the connecting derivation, degree 1-l
};

// Lift the standard-form loop of D (a closed derivation vanishing beyond the
// subalgebra prefix) across the extension and take its leading face. The
// result is the standard form of the connecting derivation, one level down.
inline BoundaryWitness boundary_witness(const Derivation& D, std::size_t split, int ell) {
  if (ell < 1) throw std::invalid_argument("boundary_witness: simplex dimension must be positive");
  if (D.n != -ell)
    throw std::invalid_argument("boundary_witness: derivation degree must be minus the dimension");
  detail::require_valid(D, "boundary_witness");
  const ResolvingAlgebra& B = *D.B;
  detail::require_prefix_closed(B, split, "boundary_witness");
  for (GenId g = static_cast<GenId>(split); g < B.ngens(); ++g) {
    if (!D.val[g].is_zero())
      throw std::invalid_argument("boundary_witness: the lift must vanish beyond the prefix");
    if (!detail::within_prefix(B.d_gen(g), split))
      throw std::invalid_argument("boundary_witness: generator differentials must land in the prefix");
  }
  Derivation delta = D.differential();
  for (GenId g = 0; g < static_cast<GenId>(split); ++g)
    if (!delta.val[g].is_zero())
      throw std::invalid_argument("boundary_witness: the restriction to the prefix is not closed");

  const DGAMorphism& P = *D.P;
  int eps = detail::half_turn_sign(ell);
  SimplexForm omega = omega_form(ell);
  SimplexForm tau = tau_form(ell);
  SimplexMorphism lifted{B, *D.A, ell, {}};
  for (GenId g = 0; g < B.ngens(); ++g) {
    SimplexForm tail = (static_cast<std::size_t>(g) < split)
                           ? omega * SimplexForm::constant(ell, D.val[g])
                           : tau * SimplexForm::constant(ell, D.apply(B.d_gen(g)));
    if (eps < 0) tail = -tail;
    lifted.val.push_back(SimplexForm::constant(ell, P.val[g]) + tail);
  }
  auto rep = lifted.validate();
  if (!rep.ok)
    throw std::logic_error("boundary_witness: lift failed validation: " + rep.violations.front());
  SimplexMorphism base = constant_simplex_morphism(P, ell - 1);
  for (int i = 1; i <= ell; ++i)
    if (!(lifted.face(i) == base))
      throw std::logic_error("boundary_witness: a positive face differs from the base point");

  SimplexMorphism face0 = lifted.face(0);
  if (ell >= 2) {
    SimplexMorphism expect = xi_ell(delta, ell - 1);
    if (!(face0.val == expect.val))
      throw std::logic_error("boundary_witness: leading face is not the connecting standard form");
  } else {
    DGAMorphism end = face0.as_morphism();
    for (GenId g = 0; g < B.ngens(); ++g)
      if (!(end.val[g] == P.val[g] + delta.val[g]))
        throw std::logic_error("boundary_witness: leading face is not the connecting morphism");
  }
  return BoundaryWitness{std::move(lifted), std::move(face0), std::move(delta)};
}

struct SliceClass {
  int degree = 0;
  QVec coords;

  bool is_zero() const {
    for (auto& c : coords)
      if (c != 0) return false;
    return true;
  }
};

namespace detail {

// B' = everything except x must be a differential subalgebra, and x itself
// must have its differential inside it.
inline void require_split_generator(const ResolvingAlgebra& B, GenId x, const char* who) {
  if (x >= B.ngens() || x < B.base_count())
    throw std::invalid_argument(std::string(who) + ": distinguished generator out of range");
  for (GenId g = 0; g < B.ngens(); ++g)
    for (auto& [m, c] : B.d_gen(g).terms())
      if (m.exponent_of(x) > 0)
        throw std::invalid_argument(std::string(who) +
                                    ": generator differentials must avoid the distinguished generator");
}

}  // namespace detail

// The stabilizer map for extending along one generator: the class of D(dx).
inline SliceClass xi_P_class(const Derivation& D, GenId x) {
  if (D.n != -1) throw std::invalid_argument("xi_P_class: derivation degree must be -1");
  detail::require_valid(D, "xi_P_class");
  const ResolvingAlgebra& B = *D.B;
  detail::require_split_generator(B, x, "xi_P_class");
  if (!D.val[x].is_zero())
    throw std::invalid_argument("xi_P_class: the derivation must vanish on the distinguished generator");
  Derivation dD = D.differential();
  for (GenId g = 0; g < B.ngens(); ++g)
    if (g != x && !dD.val[g].is_zero())
      throw std::invalid_argument("xi_P_class: the derivation is not closed away from the distinguished generator");
  const ResolvingAlgebra& A = *D.A;
  int r = B.gen(x).degree;
  Poly w = D.apply(B.d_gen(x));
  AlgebraSlice S = algebra_slice(A, r - 1, std::min(r + 1, 0));
  auto cls = slice_class(S, A, r, w);
  if (!cls) throw std::logic_error("xi_P_class: the pairing value is not a cycle");
  return SliceClass{r, *cls};
}

struct ExtensionOutcome {
  SliceClass obstruction;
  std::optional<DGAMorphism> extension;
};

// Obstruction to extending a morphism over one more generator: the class of
// f(dx) one degree up. When it vanishes, an extension with d(f(x)) = f(dx)
// is produced by exact linear solving.
inline ExtensionOutcome extension_obstruction(const DGAMorphism& f, GenId x) {
  const ResolvingAlgebra& B = f.src;
  const ResolvingAlgebra& A = f.dst;
  detail::require_split_generator(B, x, "extension_obstruction");
  if (f.val.size() != B.ngens())
    throw std::invalid_argument("extension_obstruction: morphism value count mismatch");
  for (GenId g = 0; g < B.ngens(); ++g) {
    if (g == x) continue;
    const Poly& v = f.val[g];
    if (!v.is_zero() && (!v.is_homogeneous() || *v.hom_degree() != B.gen(g).degree))
      throw std::invalid_argument("extension_obstruction: image of " + B.gen(g).name +
                                  " has the wrong degree");
    if (!(f.apply(B.d_gen(g)) == A.d(v)))
      throw std::invalid_argument("extension_obstruction: the morphism does not respect d away from " +
                                  B.gen(x).name);
  }
  int r = B.gen(x).degree;
  Poly w = f.apply(B.d_gen(x));

  if (r + 1 > 0) {  // nothing above degree zero: the obstruction space is trivial
    if (!w.is_zero())
      throw std::logic_error("extension_obstruction: nonzero image in a vanishing degree");
    DGAMorphism ext = f;
    ext.val[x] = Poly();
    auto rep = ext.validate();
    if (!rep.ok)
      throw std::logic_error("extension_obstruction: extension failed validation: " +
                             rep.violations.front());
    return ExtensionOutcome{SliceClass{r + 1, QVec()}, std::move(ext)};
  }

  AlgebraSlice S = algebra_slice(A, r, std::min(r + 2, 0));
  auto cls = slice_class(S, A, r + 1, w);
  if (!cls) throw std::logic_error("extension_obstruction: the image of dx is not a cycle");
  ExtensionOutcome out{SliceClass{r + 1, *cls}, std::nullopt};
  if (!out.obstruction.is_zero()) return out;

  const QMat* M = S.C.map_at(r);
  if (M == nullptr) throw std::logic_error("extension_obstruction: differential window missing");
  auto sol = solve(*M, S.coords(w, r + 1));
  if (!sol.solution)
    throw std::logic_error("extension_obstruction: vanishing class without a primitive");
  DGAMorphism ext = f;
  ext.val[x] = S.element(A.scope(), r, *sol.solution);
  auto rep = ext.validate();
  if (!rep.ok)
    throw std::logic_error("extension_obstruction: extension failed validation: " +
                           rep.violations.front());
  out.extension = std::move(ext);
  return out;
}

struct TransportResult {
  bool ok = false;
  std::string note;
  QMat matrix;  // rows: target classes, columns: source classes
  std::size_t dim_src = 0;
  std::size_t dim_dst = 0;
};

// Transport of derivation cohomology along a path theta between two module
// structures: invert evaluation-at-one on cohomology, then evaluate at zero.
// Derivations valued in forms on the interval are truncated at t-degree
// t_cap; products through theta that overflow the cap are reported.
inline TransportResult der_transport(const SimplexMorphism& theta, int ell,
                                     std::uint32_t t_cap = 8) {
  if (theta.ell != 1) throw std::invalid_argument("der_transport: the path must be a 1-simplex");
  if (ell < 0) throw std::invalid_argument("der_transport: negative homotopy degree");
  {
    auto rep = theta.validate();
    if (!rep.ok)
      throw std::invalid_argument("der_transport: invalid path: " + rep.violations.front());
  }
  const ResolvingAlgebra& B = theta.src;
  const ResolvingAlgebra& A = theta.ambient;
  DGAMorphism f = theta.face(0).as_morphism();
  DGAMorphism g = theta.face(1).as_morphism();
  int lo = -ell - 1, hi = -ell + 1;
  DerSlice Sf = der_slice_exact(B, f, lo, hi);
  DerSlice Sg = der_slice_exact(B, g, lo, hi);

  // Value basis of the truncated interval forms per (slot, operator degree).
  using Key = std::tuple<std::size_t, FormKey, Monomial>;
  struct Level {
    std::vector<Key> basis;
    std::map<Key, std::size_t> pos;
  };
  std::vector<Level> levels;
  std::vector<GenId> gens = Sf.gens;
  auto key_even = [](std::uint32_t j) {
    return FormKey{std::vector<std::uint32_t>{j}, 0};
  };
  auto key_dt = [](std::uint32_t j) {
    return FormKey{std::vector<std::uint32_t>{j}, 1};
  };
  for (int nn = lo; nn <= hi; ++nn) {
    Level L;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      int base_deg = B.gen(gens[s]).degree + nn;
      for (std::uint32_t j = 0; j <= t_cap; ++j)
        for (auto& m : enumerate_monomials(A, MonoSpec{base_deg, {}, {}}))
          L.basis.push_back({s, key_even(j), m});
      for (std::uint32_t j = 0; j + 1 <= t_cap; ++j)
        for (auto& m : enumerate_monomials(A, MonoSpec{base_deg - 1, {}, {}}))
          L.basis.push_back({s, key_dt(j), m});
    }
    for (std::size_t i = 0; i < L.basis.size(); ++i) L.pos[L.basis[i]] = i;
    levels.push_back(std::move(L));
  }

  FiniteComplex Cmid;
  Cmid.lo = lo;
  for (auto& L : levels) Cmid.dims.push_back(L.basis.size());

  auto push = [&](const Monomial& m) {
    return theta.apply(Poly::term(B.scope(), Rat(1), m));
  };
  bool overflow = false;
  for (int nn = lo; nn < hi && !overflow; ++nn) {
    const Level& src = levels[static_cast<std::size_t>(nn - lo)];
    const Level& dst = levels[static_cast<std::size_t>(nn - lo + 1)];
    QMat mat(dst.basis.size(), src.basis.size());
    int sign = (nn % 2 == 0) ? 1 : -1;
    for (std::size_t j = 0; j < src.basis.size() && !overflow; ++j) {
      auto& [slot, k, m] = src.basis[j];
      SimplexForm v(1);
      v.add_term(k, Poly::term(A.scope(), Rat(1), m));
      GenId owner = gens[slot];
      for (std::size_t s2 = 0; s2 < gens.size() && !overflow; ++s2) {
        GenId g2 = gens[s2];
        SimplexForm dv =
            (g2 == owner ? v.total_d(A) : SimplexForm(1)) -
            apply_form_derivation(
                B.d_gen(g2), nn,
                [&](GenId gg) { return gg == owner ? &v : nullptr; }, push, 1)
                .scaled(Rat(sign));
        for (auto& [k2, c2] : dv.terms()) {
          if (k2.dt != 0 && t_cap == 0) {
            overflow = true;
            break;
          }
          std::uint32_t bound = (k2.dt == 0) ? t_cap : t_cap - 1;
          if (k2.t[0] > bound) {
            overflow = true;
            break;
          }
          for (auto& [m2, q2] : c2.terms()) {
            auto it = dst.pos.find({s2, k2, m2});
            if (it == dst.pos.end())
              throw std::logic_error("der_transport: differential left the value basis");
            mat.add(it->second, j, q2);
          }
        }
      }
    }
    Cmid.maps.push_back(std::move(mat));
  }
  if (overflow)
    return TransportResult{false,
                           "truncation overflow: raise the interval degree cap", QMat(), 0, 0};

  // Evaluation chain maps at the two endpoints.
  auto eval_map = [&](int nn, bool at_one) {
    const Level& L = levels[static_cast<std::size_t>(nn - lo)];
    const auto& target = (at_one ? Sf : Sg).basis_at(nn);
    std::map<std::pair<std::size_t, Monomial>, std::size_t> pos;
    for (std::size_t i = 0; i < target.size(); ++i) pos[target[i]] = i;
    QMat mat(target.size(), L.basis.size());
    for (std::size_t j = 0; j < L.basis.size(); ++j) {
      auto& [slot, k, m] = L.basis[j];
      if (k.dt != 0) continue;
      if (!at_one && k.t[0] != 0) continue;
      auto it = pos.find({slot, m});
      if (it == pos.end())
        throw std::logic_error("der_transport: endpoint basis mismatch");
      mat.add(it->second, j, Rat(1));
    }
    return mat;
  };

  int deg = -ell;
  auto hmid = cohomology(Cmid, deg);
  auto hf = cohomology(Sf.C, deg);
  auto hg = cohomology(Sg.C, deg);
  QMat M0 = induced_on_cohomology(Cmid, Sf.C, deg, eval_map(deg, true), hmid, hf);
  QMat M1 = induced_on_cohomology(Cmid, Sg.C, deg, eval_map(deg, false), hmid, hg);

  TransportResult out;
  out.dim_src = hf.dim;
  out.dim_dst = hg.dim;
  if (hmid.dim != hf.dim || rank(M0) != hf.dim) {
    out.ok = false;
    out.note = "evaluation at one is not invertible at this truncation (rank defect)";
    return out;
  }
  QMat T(hg.dim, hf.dim);
  for (std::size_t j = 0; j < hf.dim; ++j) {
    QVec e(hf.dim, Rat(0));
    e[j] = 1;
    auto sol = solve(M0, e);
    if (!sol.solution) {
      out.ok = false;
      out.note = "evaluation at one is not invertible at this truncation (rank defect)";
      return out;
    }
    QVec col = M1.apply(*sol.solution);
    for (std::size_t i = 0; i < hg.dim; ++i)
      if (col[i] != 0) T.set(i, j, col[i]);
  }
  out.ok = true;
  out.matrix = std::move(T);
  return out;
}

}  // namespace dgres
