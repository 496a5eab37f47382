#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "dgres/algebra.hpp"

namespace dgres {

// First name in name, name', name'', ... not yet used in the scope.
inline std::string fresh_name(const ScopePtr& sc, std::string name) {
  while (sc && sc->find(name)) name += "'";
  return name;
}

struct CellSpec {
  std::string name;
  int degree = 0;
  int weight = 0;
};

// Extends A by new free generators with d = 0; differentials are filled in by
// the caller (they may involve the new cells) and checked via validate().
inline ResolvingAlgebra adjoin_cells(const ResolvingAlgebra& A, const std::vector<CellSpec>& cells) {
  ResolvingAlgebra B = A;
  for (auto& c : cells) B.add_gen(c.name, c.degree, c.weight);
  return B;
}

struct TensorResult {
  ResolvingAlgebra prod;
  DGAMorphism incl_left;   // A -> A (x) B
  DGAMorphism incl_right;  // B -> A (x) B
};

// Free product of the underlying algebras with the inherited differentials.
// Left factor keeps its generator names; colliding right names get primes.
inline TensorResult tensor(const ResolvingAlgebra& A, const ResolvingAlgebra& B) {
  ResolvingAlgebra T;
  std::vector<GenId> la(A.ngens()), rb(B.ngens());
  for (GenId g = 0; g < A.ngens(); ++g)
    la[g] = T.add_gen(A.gen(g).name, A.gen(g).degree, A.gen(g).weight);
  for (GenId g = 0; g < B.ngens(); ++g)
    rb[g] = T.add_gen(fresh_name(T.scope(), B.gen(g).name), B.gen(g).degree, B.gen(g).weight);

  std::vector<Poly> ia, ib;
  for (GenId g = 0; g < A.ngens(); ++g) ia.push_back(T.generator(la[g]));
  for (GenId g = 0; g < B.ngens(); ++g) ib.push_back(T.generator(rb[g]));
  for (GenId g = 0; g < A.ngens(); ++g) T.set_d(la[g], A.d_gen(g).substitute(T.scope(), ia));
  for (GenId g = 0; g < B.ngens(); ++g) T.set_d(rb[g], B.d_gen(g).substitute(T.scope(), ib));
  return {T, DGAMorphism{A, T, std::move(ia)}, DGAMorphism{B, T, std::move(ib)}};
}

struct TruncationResult {
  ResolvingAlgebra sub;
  DGAMorphism incl;       // sub -> B
  bool complete = false;  // true when nothing was dropped
};

// Subalgebra generated by the generators of degree >= -n (every base
// generator is kept regardless of degree). Because all degrees are <= 0, the
// differential of a kept generator only involves kept generators.
inline TruncationResult truncation(const ResolvingAlgebra& B, int n) {
  ResolvingAlgebra S;
  std::vector<GenId> keep;
  for (GenId g = 0; g < B.ngens(); ++g)
    if (B.gen(g).degree >= -n || g < B.base_count()) keep.push_back(g);

  std::vector<Poly> old_to_new(B.ngens());  // images of kept old generators
  std::vector<GenId> new_id(B.ngens(), 0);
  for (GenId g : keep) {
    new_id[g] = S.add_gen(B.gen(g).name, B.gen(g).degree, B.gen(g).weight);
    old_to_new[g] = S.generator(new_id[g]);
  }
  S.mark_base(B.base_count());  // base generators are a prefix and always kept
  for (GenId g : keep) S.set_d(new_id[g], B.d_gen(g).substitute(S.scope(), old_to_new));

  DGAMorphism incl{S, B, {}};
  for (GenId g : keep) incl.val.push_back(B.generator(g));
  return {S, std::move(incl), keep.size() == B.ngens()};
}

struct StandardEtaleResult {
  ResolvingAlgebra B;
  DGAMorphism incl;            // A -> B
  std::vector<GenId> xs, xis;  // the adjoined variables and cells
  std::vector<Poly> f;         // over B's scope
};

// B = A[x_1..x_r]{xi_1..xi_r}, d(xi_i) = f_i, for degree-0 equations f_i in
// the degree-0 part of A[x]. `make_f` receives the algebra with the x's
// already present and produces the equations. Cell names come from `cells`,
// defaulting to xi_<var>.
template <class MakeF>
StandardEtaleResult standard_etale(const ResolvingAlgebra& A, const std::vector<std::string>& xs,
                                   MakeF&& make_f, std::vector<std::string> cells = {}) {
  ResolvingAlgebra B = A;
  StandardEtaleResult out;
  for (auto& name : xs) out.xs.push_back(B.add_gen(fresh_name(B.scope(), name), 0));
  std::vector<Poly> f = make_f(const_cast<const ResolvingAlgebra&>(B));
  if (f.size() != xs.size())
    throw std::invalid_argument("standard_etale: need one equation per variable");
  for (std::size_t i = 0; i < f.size(); ++i) {
    Poly fi = f[i].rescope(B.scope());
    if (!fi.is_zero() && (!fi.is_homogeneous() || *fi.hom_degree() != 0))
      throw std::invalid_argument("standard_etale: equation is not of degree 0");
    std::string cname = i < cells.size() ? cells[i] : "xi_" + B.gen(out.xs[i]).name;
    GenId xi = B.add_gen(fresh_name(B.scope(), cname), -1);
    out.xis.push_back(xi);
    B.set_d(xi, fi);
    out.f.push_back(fi);
  }
  out.B = B;
  out.incl = DGAMorphism{A, out.B, {}};
  for (GenId g = 0; g < A.ngens(); ++g) out.incl.val.push_back(out.B.generator(g));
  return out;
}

// A_g = A[y]{eta}, d(eta) = g*y - 1: inverts the degree-0 cycle g.
inline StandardEtaleResult localize(const ResolvingAlgebra& A, const Poly& g) {
  Poly gg = g.rescope(A.scope());
  if (!gg.is_zero() && (!gg.is_homogeneous() || *gg.hom_degree() != 0))
    throw std::invalid_argument("localize: element is not of degree 0");
  if (!A.d(gg).is_zero()) throw std::invalid_argument("localize: element is not a cycle");
  return standard_etale(
      A, {"y"},
      [&](const ResolvingAlgebra& B) {
        GenId y = static_cast<GenId>(B.ngens() - 1);
        return std::vector<Poly>{gg.rescope(B.scope()) * B.generator(y) - Poly(1)};
      },
      {"eta"});
}

// Koszul complex: even variables x_1..x_n in degree 0 with d = 0 and odd cells
// e_1..e_m in degree -1 with d(e_i) = s_i(x). When every section is homogeneous
// as a polynomial, weights are declared (x_j: 1, e_i: deg s_i) so the
// weight-graded cohomology mode applies.
template <class MakeS>
ResolvingAlgebra koszul(std::size_t n, std::size_t m, MakeS&& make_s) {
  ResolvingAlgebra K0;
  std::vector<Poly> vars0;
  for (std::size_t j = 0; j < n; ++j) K0.add_gen("x" + std::to_string(j + 1), 0, 1);
  std::vector<Poly> s = make_s(const_cast<const ResolvingAlgebra&>(K0));
  if (s.size() != m) throw std::invalid_argument("koszul: need one section per cell");

  auto exp_degree_if_homog = [](const Poly& p) -> int {
    int d = -1;
    for (auto& [mono, c] : p.terms()) {
      int t = static_cast<int>(mono.total_exponent());
      if (d >= 0 && t != d) return -1;
      d = t;
    }
    return d;
  };
  bool weighted = true;
  std::vector<int> wts;
  for (auto& sec : s) {
    int w = exp_degree_if_homog(sec);
    wts.push_back(w);
    if (w <= 0) weighted = false;
  }

  ResolvingAlgebra K;
  std::vector<Poly> vars;
  for (std::size_t j = 0; j < n; ++j)
    vars.push_back(K.generator(K.add_gen("x" + std::to_string(j + 1), 0, weighted ? 1 : 0)));
  std::vector<GenId> cells;
  for (std::size_t i = 0; i < m; ++i)
    cells.push_back(K.add_gen("e" + std::to_string(i + 1), -1, weighted ? wts[i] : 0));
  for (std::size_t i = 0; i < m; ++i) K.set_d(cells[i], s[i].substitute(K.scope(), vars));
  return K;
}

}  // namespace dgres
