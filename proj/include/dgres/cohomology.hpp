#pragma once

// Cohomology of the algebra itself, computed on finite monomial bases. Three
// finiteness regimes: no degree-0 generators (each degree is finite), positive
// weights (each degree-weight pair is finite), or an explicit cap on total
// exponents (used by bounded solvers, not a quotient).

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/linalg.hpp"
#include "dgres/poly.hpp"

namespace dgres {

struct MonoSpec {
  int degree = 0;
  std::optional<int> weight;            // exact weight (requires all-positive weights)
  std::optional<std::uint32_t> exp_cap;  // max total exponent
};

// All monomials matching the spec, in increasing monomial order.
inline std::vector<Monomial> enumerate_monomials(const ResolvingAlgebra& A, MonoSpec spec) {
  if (spec.weight && !A.has_weights())
    throw std::invalid_argument("enumerate_monomials: weight filter needs weighted generators");
  bool has_zero = !A.degree0_gens().empty();
  if (has_zero && !spec.weight && !spec.exp_cap)
    throw std::invalid_argument(
        "enumerate_monomials: degree-0 generators make the slice infinite; pass a weight or cap");
  if (spec.degree > 0 || (spec.weight && *spec.weight < 0)) return {};

  std::vector<Monomial> out;
  std::vector<Monomial::Entry> cur;
  // Track what remains to absorb: degree deficit, weight deficit, cap room.
  auto rec = [&](auto&& self, GenId g, int deg_left, int w_left, std::uint32_t cap_left) -> void {
    if (g == A.ngens()) {
      if (deg_left == 0 && (!spec.weight || w_left == 0)) out.push_back(Monomial::of(cur));
      return;
    }
    const GenInfo& info = A.gen(g);
    std::uint32_t max_e = cap_left;
    if (info.degree < 0)
      max_e = std::min<std::uint32_t>(max_e,
                                      static_cast<std::uint32_t>(deg_left / info.degree));
    if (spec.weight && info.weight > 0)
      max_e = std::min<std::uint32_t>(max_e, static_cast<std::uint32_t>(w_left / info.weight));
    if (A.scope()->odd(g)) max_e = std::min<std::uint32_t>(max_e, 1);
    for (std::uint32_t e = 0; e <= max_e; ++e) {
      if (e > 0) cur.emplace_back(g, e);
      self(self, g + 1, deg_left - info.degree * static_cast<int>(e),
           w_left - info.weight * static_cast<int>(e), cap_left - e);
      if (e > 0) cur.pop_back();
    }
  };
  // Degree deficits are never positive; flip the signs so the division bound
  // above stays in non-negative territory.
  std::uint32_t cap = spec.exp_cap.value_or(std::numeric_limits<std::uint32_t>::max());
  rec(rec, 0, spec.degree, spec.weight.value_or(0), cap);
  std::sort(out.begin(), out.end());
  return out;
}

// A slice of the algebra's cochain complex over [lo, hi], with the monomial
// bases recorded per degree. Values of h^i are reliable for i > lo (the
// bottom spot is missing incoming differentials).
struct AlgebraSlice {
  int lo = 0;
  std::vector<std::vector<Monomial>> bases;
  FiniteComplex C;

  const std::vector<Monomial>& basis_at(int deg) const {
    return bases.at(static_cast<std::size_t>(deg - lo));
  }

  QVec coords(const Poly& p, int deg) const {
    const auto& b = basis_at(deg);
    std::map<Monomial, std::size_t> pos;
    for (std::size_t i = 0; i < b.size(); ++i) pos[b[i]] = i;
    QVec v(b.size(), Rat(0));
    for (auto& [m, c] : p.terms()) {
      auto it = pos.find(m);
      if (it == pos.end()) throw std::invalid_argument("coords: monomial outside the slice basis");
      v[it->second] = c;
    }
    return v;
  }

  Poly element(const ScopePtr& sc, int deg, const QVec& v) const {
    const auto& b = basis_at(deg);
    Poly p;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (v[i] != 0) p += Poly::term(sc, v[i], b[i]);
    return p;
  }
};

inline AlgebraSlice algebra_slice(const ResolvingAlgebra& A, int lo, int hi,
                                  std::optional<int> weight = std::nullopt) {
  AlgebraSlice out;
  out.lo = lo;
  out.C.lo = lo;
  for (int d = lo; d <= hi; ++d) {
    out.bases.push_back(enumerate_monomials(A, MonoSpec{d, weight, std::nullopt}));
    out.C.dims.push_back(out.bases.back().size());
  }
  for (int d = lo; d < hi; ++d) {
    const auto& src = out.bases[static_cast<std::size_t>(d - lo)];
    const auto& dst = out.bases[static_cast<std::size_t>(d - lo + 1)];
    std::map<Monomial, std::size_t> pos;
    for (std::size_t i = 0; i < dst.size(); ++i) pos[dst[i]] = i;
    QMat mat(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      Poly dv = A.d(Poly::term(A.scope(), Rat(1), src[j]));
      for (auto& [m, c] : dv.terms()) {
        auto it = pos.find(m);
        if (it == pos.end())
          throw std::logic_error("algebra_slice: differential left the slice basis");
        mat.add(it->second, j, c);
      }
    }
    out.C.maps.push_back(std::move(mat));
  }
  return out;
}

// Cohomology class of a cycle in the sliced complex; nullopt when the element
// is not a cycle. The returned coordinates refer to cohomology(C, deg) reps.
inline std::optional<QVec> slice_class(const AlgebraSlice& S, const ResolvingAlgebra& A, int deg,
                                       const Poly& z) {
  if (!A.d(z).is_zero()) return std::nullopt;
  auto h = cohomology(S.C, deg);
  QVec w = S.coords(z, deg);
  return class_coordinates(S.C, deg, h.reps, w);
}

}  // namespace dgres
