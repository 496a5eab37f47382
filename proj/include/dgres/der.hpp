#pragma once

// Complexes of graded derivations B -> A through a morphism P: values on the
// non-base generators of B, extended by the twisted Leibniz rule
//   D(xy) = D(x) P(y) + (-1)^{n deg x} P(x) D(y).
// Finite slices come in three regimes, mirroring the algebra cohomology ones.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/cohomology.hpp"
#include "dgres/derivation.hpp"
#include "dgres/linalg.hpp"
#include "dgres/truncated.hpp"

namespace dgres {

struct Derivation {
  const ResolvingAlgebra* B = nullptr;  // source
  const ResolvingAlgebra* A = nullptr;  // value algebra
  const DGAMorphism* P = nullptr;       // module structure B -> A
  int n = 0;                            // operator degree
  std::vector<Poly> val;                // per B generator; zero on the base prefix

  Poly apply(const Poly& p) const {
    return apply_derivation_pushed(
        p.rescope(B->scope()), n, [&](GenId g) { return &val[g]; },
        [&](const Monomial& m) { return P->apply(Poly::term(B->scope(), Rat(1), m)); },
        A->scope());
  }

  ValidationReport validate() const {
    ValidationReport rep;
    if (val.size() != B->ngens()) {
      rep.fail("derivation value count does not match generators");
      return rep;
    }
    for (GenId g = 0; g < B->ngens(); ++g) {
      if (g < B->base_count() && !val[g].is_zero())
        rep.fail("derivation does not kill base generator " + B->gen(g).name);
      if (val[g].is_zero()) continue;
      if (!val[g].is_homogeneous() || *val[g].hom_degree() != B->gen(g).degree + n)
        rep.fail("value on " + B->gen(g).name + " is not homogeneous of degree " +
                 std::to_string(B->gen(g).degree + n));
    }
    return rep;
  }

  // dD = d_A o D - (-1)^n D o d_B, again a derivation, of degree n + 1.
  Derivation differential() const {
    Derivation out{B, A, P, n + 1, {}};
    int sign = (n % 2 == 0) ? 1 : -1;
    for (GenId g = 0; g < B->ngens(); ++g) {
      Poly v = A->d(val[g]) - Poly(sign) * apply(B->d_gen(g));
      out.val.push_back(std::move(v));
    }
    return out;
  }
};

// A finite slice of the derivation complex over operator degrees [lo, hi].
// Basis elements are (generator slot, value monomial) pairs.
struct DerSlice {
  int lo = 0;
  std::vector<GenId> gens;  // non-base generators of B, slot order
  std::vector<std::vector<std::pair<std::size_t, Monomial>>> bases;
  FiniteComplex C;

  const std::vector<std::pair<std::size_t, Monomial>>& basis_at(int deg) const {
    return bases.at(static_cast<std::size_t>(deg - lo));
  }
};

namespace detail {

// Shared machinery: the value algebra, its differential, the pushforward of
// B-words into it, and the per-(generator, operator degree) value basis.
struct DerCtx {
  const ResolvingAlgebra* B;
  const ResolvingAlgebra* V;  // value algebra (possibly recentered)
  std::function<Poly(const Poly&)> dV;
  std::function<Poly(const Monomial&)> push;  // B-word -> V
  std::function<std::vector<Monomial>(GenId g, int opdeg)> value_basis;
  std::function<Poly(const Poly&)> clip;  // post-reduction (identity unless truncated)
};

inline DerSlice der_slice_core(const DerCtx& ctx, int lo, int hi) {
  const ResolvingAlgebra& B = *ctx.B;
  DerSlice out;
  out.lo = lo;
  out.C.lo = lo;
  for (GenId g = static_cast<GenId>(B.base_count()); g < B.ngens(); ++g) out.gens.push_back(g);

  for (int nn = lo; nn <= hi; ++nn) {
    std::vector<std::pair<std::size_t, Monomial>> basis;
    for (std::size_t s = 0; s < out.gens.size(); ++s)
      for (auto& m : ctx.value_basis(out.gens[s], nn)) basis.emplace_back(s, m);
    out.bases.push_back(std::move(basis));
    out.C.dims.push_back(out.bases.back().size());
  }

  auto apply_through = [&](const std::vector<Poly>& val, int n, const Poly& p) {
    return ctx.clip(apply_derivation_pushed(
        p.rescope(B.scope()), n, [&](GenId g) { return &val[g]; },
        [&](const Monomial& m) { return ctx.push(m); }, ctx.V->scope()));
  };

  for (int nn = lo; nn < hi; ++nn) {
    const auto& src = out.basis_at(nn);
    const auto& dst = out.basis_at(nn + 1);
    std::map<std::pair<std::size_t, Monomial>, std::size_t> pos;
    for (std::size_t i = 0; i < dst.size(); ++i) pos[dst[i]] = i;
    QMat mat(dst.size(), src.size());
    int sign = (nn % 2 == 0) ? 1 : -1;
    for (std::size_t j = 0; j < src.size(); ++j) {
      std::vector<Poly> val(B.ngens(), Poly());
      val[out.gens[src[j].first]] = Poly::term(ctx.V->scope(), Rat(1), src[j].second);
      for (std::size_t s = 0; s < out.gens.size(); ++s) {
        GenId g = out.gens[s];
        Poly v = ctx.clip(ctx.dV(val[g])) - Poly(sign) * apply_through(val, nn, B.d_gen(g));
        for (auto& [m, c] : v.terms()) {
          auto it = pos.find({s, m});
          if (it == pos.end())
            throw std::logic_error("derivation slice: differential left the basis");
          mat.add(it->second, j, c);
        }
      }
    }
    out.C.maps.push_back(std::move(mat));
  }
  return out;
}

}  // namespace detail

// Value algebra without degree-0 generators: every degree is finite.
inline DerSlice der_slice_exact(const ResolvingAlgebra& B, const DGAMorphism& P, int lo, int hi) {
  const ResolvingAlgebra& A = P.dst;
  if (!A.degree0_gens().empty())
    throw std::invalid_argument("der_slice_exact: value algebra has degree-0 generators");
  detail::DerCtx ctx{
      &B,
      &A,
      [&A](const Poly& p) { return A.d(p); },
      [&B, &P](const Monomial& m) { return P.apply(Poly::term(B.scope(), Rat(1), m)); },
      [&A, &B](GenId g, int nn) {
        return enumerate_monomials(A, MonoSpec{B.gen(g).degree + nn, {}, {}});
      },
      [](const Poly& p) { return p; }};
  return detail::der_slice_core(ctx, lo, hi);
}

// Weighted value algebra, derivations of a fixed weight shift.
inline DerSlice der_slice_weight(const ResolvingAlgebra& B, const DGAMorphism& P, int lo, int hi,
                                 int shift) {
  const ResolvingAlgebra& A = P.dst;
  if (!A.has_weights() || !B.has_weights())
    throw std::invalid_argument("der_slice_weight: both algebras need positive weights");
  detail::DerCtx ctx{
      &B,
      &A,
      [&A](const Poly& p) { return A.d(p); },
      [&B, &P](const Monomial& m) { return P.apply(Poly::term(B.scope(), Rat(1), m)); },
      [&A, &B, shift](GenId g, int nn) {
        const GenInfo& info = B.gen(g);
        return enumerate_monomials(A, MonoSpec{info.degree + nn, info.weight + shift, {}});
      },
      [](const Poly& p) { return p; }};
  return detail::der_slice_core(ctx, lo, hi);
}

// Values in the order-N truncation of the target at a point.
inline DerSlice der_slice_truncated(const ResolvingAlgebra& B, const DGAMorphism& P,
                                    const Augmentation& epsA, int order, int lo, int hi) {
  const ResolvingAlgebra& A = P.dst;
  auto T = std::make_shared<TruncatedDGA>(madic_truncate(A, epsA, order));
  // Recentering A -> A': a(y) -> a(y' + eps).
  auto recenter = std::make_shared<std::vector<Poly>>();
  for (GenId g = 0; g < A.ngens(); ++g) {
    Poly img = T->algebra().generator(g);
    if (A.gen(g).degree == 0) img += Poly(epsA.val[g]);
    recenter->push_back(img);
  }
  detail::DerCtx ctx{
      &B,
      &T->algebra(),
      [T](const Poly& p) { return T->reduce(T->algebra().d(p)); },
      [&B, &P, T, recenter](const Monomial& m) {
        Poly img = P.apply(Poly::term(B.scope(), Rat(1), m));
        return T->reduce(img.substitute(T->algebra().scope(), *recenter));
      },
      [T, &B](GenId g, int nn) {
        std::vector<Monomial> out;
        for (auto& m : T->basis())
          if (m.degree(*T->algebra().scope()) == B.gen(g).degree + nn) out.push_back(m);
        return out;
      },
      [T](const Poly& p) { return T->reduce(p); }};
  return detail::der_slice_core(ctx, lo, hi);
}

// Reconstruct a derivation's value table from slice coordinates at operator
// degree n.
inline std::vector<Poly> derivation_values(const DerSlice& S, const ResolvingAlgebra& B,
                                           const ScopePtr& value_scope, int n, const QVec& v) {
  std::vector<Poly> val(B.ngens(), Poly());
  const auto& basis = S.basis_at(n);
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (v[k] != 0) val[S.gens[basis[k].first]] += Poly::term(value_scope, v[k], basis[k].second);
  return val;
}

}  // namespace dgres
