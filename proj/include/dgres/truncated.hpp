#pragma once

// Finite-dimensional truncations of a resolving algebra at a rational point:
// quotient by the N-th power of the maximal ideal after re-centering the
// degree-0 generators, so the surviving basis is every monomial of total
// exponent below N.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/linalg.hpp"
#include "dgres/poly.hpp"

namespace dgres {

class TruncatedDGA {
 public:
  TruncatedDGA(ResolvingAlgebra shifted, int order)
      : shifted_(std::move(shifted)), order_(order) {
    if (order_ < 1) throw std::invalid_argument("truncation order must be positive");
    std::vector<Monomial::Entry> cur;
    enumerate(0, 0, cur);
    std::sort(basis_.begin(), basis_.end());
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
  }

  const ResolvingAlgebra& algebra() const { return shifted_; }
  int order() const { return order_; }
  const std::vector<Monomial>& basis() const { return basis_; }

  // Kill every term of total exponent >= N.
  Poly reduce(const Poly& p) const {
    Poly out;
    for (auto& [m, c] : p.terms())
      if (m.total_exponent() < static_cast<std::uint32_t>(order_))
        out += Poly::term(p.scope(), c, m);
    return out;
  }

  Poly d_of(const Monomial& m) const {
    return reduce(shifted_.d(Poly::term(shifted_.scope(), Rat(1), m)));
  }

  std::vector<std::size_t> degree_slice(int deg) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i].degree(*shifted_.scope()) == deg) out.push_back(i);
    return out;
  }

  int lowest_degree() const {
    int lo = 0;
    for (auto& m : basis_) lo = std::min(lo, m.degree(*shifted_.scope()));
    return lo;
  }

  // Coordinates of p on the degree-d slice; p must be supported on basis
  // monomials of that degree.
  QVec coords(const Poly& p, int deg) const {
    auto slice = degree_slice(deg);
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t k = 0; k < slice.size(); ++k) pos[slice[k]] = k;
    QVec v(slice.size(), Rat(0));
    for (auto& [m, c] : p.terms()) {
      auto it = index_.find(m);
      if (it == index_.end() || !pos.count(it->second))
        throw std::invalid_argument("coords: term outside the degree slice");
      v[pos.at(it->second)] = c;
    }
    return v;
  }

  // Cochain complex of the truncation over degrees [lo, hi].
  FiniteComplex complex(int lo, int hi) const {
    FiniteComplex C;
    C.lo = lo;
    std::vector<std::vector<std::size_t>> slices;
    for (int d = lo; d <= hi; ++d) slices.push_back(degree_slice(d));
    for (auto& s : slices) C.dims.push_back(s.size());
    for (int d = lo; d < hi; ++d) {
      const auto& src = slices[static_cast<std::size_t>(d - lo)];
      const auto& dst = slices[static_cast<std::size_t>(d - lo + 1)];
      std::map<std::size_t, std::size_t> dst_pos;
      for (std::size_t k = 0; k < dst.size(); ++k) dst_pos[dst[k]] = k;
      QMat mat(dst.size(), src.size());
      for (std::size_t j = 0; j < src.size(); ++j) {
        Poly dv = d_of(basis_[src[j]]);
        for (auto& [m, c] : dv.terms()) {
          auto it = index_.find(m);
          if (it == index_.end() || !dst_pos.count(it->second))
            throw std::logic_error("truncation differential left the expected slice");
          mat.add(dst_pos.at(it->second), j, c);
        }
      }
      C.maps.push_back(std::move(mat));
    }
    return C;
  }

 private:
  void enumerate(std::size_t gi, std::uint32_t used, std::vector<Monomial::Entry>& cur) {
    if (gi == shifted_.ngens()) {
      basis_.push_back(Monomial::of(cur));
      return;
    }
    const GenId g = static_cast<GenId>(gi);
    const std::uint32_t room = static_cast<std::uint32_t>(order_) - 1 - used;
    const std::uint32_t hi = shifted_.scope()->odd(g) ? std::min<std::uint32_t>(1, room) : room;
    enumerate(gi + 1, used, cur);
    for (std::uint32_t e = 1; e <= hi; ++e) {
      cur.emplace_back(g, e);
      enumerate(gi + 1, used + e, cur);
      cur.pop_back();
    }
  }

  ResolvingAlgebra shifted_;
  int order_;
  std::vector<Monomial> basis_;
  std::map<Monomial, std::size_t> index_;
};

// Re-center the algebra at eps (substituting x -> x + eps(x) into every d)
// and truncate at total exponent N.  Validity of the augmentation guarantees
// the re-centered differential lands in the maximal ideal.
inline TruncatedDGA madic_truncate(const ResolvingAlgebra& A, const Augmentation& eps, int N) {
  if (auto rep = eps.validate(); !rep.ok)
    throw std::invalid_argument("madic_truncate: invalid point: " +
                                (rep.violations.empty() ? std::string() : rep.violations[0]));
  ResolvingAlgebra shifted;
  for (GenId g = 0; g < A.ngens(); ++g)
    shifted.add_gen(A.gen(g).name, A.gen(g).degree, A.gen(g).weight);
  // x -> x + eps(x) on degree-0 generators, landing in the fresh scope.
  std::vector<Poly> shift;
  for (GenId g = 0; g < A.ngens(); ++g) {
    Poly img = shifted.generator(g);
    if (A.gen(g).degree == 0) img += Poly(eps.val[g]);
    shift.push_back(img);
  }
  for (GenId g = 0; g < A.ngens(); ++g)
    shifted.set_d(g, A.d_gen(g).substitute(shifted.scope(), shift));
  shifted.mark_base(A.base_count());
  return TruncatedDGA(std::move(shifted), N);
}

// Chain map between two truncations induced by a morphism compatible with the
// chosen points.
struct TruncMap {
  const TruncatedDGA* src;
  const TruncatedDGA* dst;
  std::vector<Poly> images;  // per source generator, in recentered target coordinates

  Poly apply_monomial(const Monomial& m) const {
    Poly acc(1);
    for (auto& [g, e] : m.entries())
      for (std::uint32_t k = 0; k < e; ++k) acc = acc * images[g];
    return dst->reduce(acc);
  }

  QMat matrix_at(int deg) const {
    auto ssl = src->degree_slice(deg);
    auto dsl = dst->degree_slice(deg);
    std::map<std::size_t, std::size_t> dst_pos;
    for (std::size_t k = 0; k < dsl.size(); ++k) dst_pos[dsl[k]] = k;
    QMat mat(dsl.size(), ssl.size());
    for (std::size_t j = 0; j < ssl.size(); ++j) {
      Poly img = apply_monomial(src->basis()[ssl[j]]);
      QVec col = dst->coords(img, deg);
      for (std::size_t i = 0; i < col.size(); ++i)
        if (col[i] != 0) mat.add(i, j, col[i]);
    }
    return mat;
  }
};

inline TruncMap transport(const DGAMorphism& f, const Augmentation& epsA,
                          const Augmentation& epsB, const TruncatedDGA& TA,
                          const TruncatedDGA& TB) {
  const ResolvingAlgebra& A = f.src;
  const ResolvingAlgebra& B = f.dst;
  std::vector<Poly> recenterB;
  for (GenId g = 0; g < B.ngens(); ++g) {
    Poly img = B.generator(g);
    if (B.gen(g).degree == 0) img += Poly(epsB.val[g]);
    recenterB.push_back(img);
  }
  TruncMap tm{&TA, &TB, {}};
  for (GenId g = 0; g < A.ngens(); ++g) {
    Poly img = f.val[g].substitute(B.scope(), recenterB);
    if (A.gen(g).degree == 0) {
      if (epsB.ev(f.val[g]) != epsA.val[g])
        throw std::invalid_argument("transport: points are not compatible on " + A.gen(g).name);
      img -= Poly(epsA.val[g]);
    }
    tm.images.push_back(TB.reduce(img));
  }
  return tm;
}

}  // namespace dgres
