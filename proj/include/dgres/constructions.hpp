#pragma once

// Effective constructions over the kernel: the diagonal resolution of an
// algebra, resolutions of arbitrary morphisms derived from it, and derived
// tensor products assembled from the persisted diagonal witnesses.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgres/algebra_ops.hpp"
#include "dgres/solve.hpp"

namespace dgres {

// One cell of the diagonal resolution, with the solver artifacts that make
// downstream constructions reproducible: d(cell) = z_i - y_i + h and
// delta(cell) = g with d(g) = delta(h).
struct DiagonalWitness {
  GenId cell = 0;
  Poly h;
  Poly g;
  std::uint32_t cap_used = 0;
};

struct DiagonalResolution {
  ResolvingAlgebra ext;      // A (x) A with one cell per generator
  DGAMorphism delta;         // ext -> A, both copies to the identity
  DGAMorphism left, right;   // the two inclusions A -> ext
  std::vector<GenId> ys, zs; // generator ids of the two copies inside ext
  std::vector<DiagonalWitness> witnesses;
};

inline DiagonalResolution diagonal_resolution(const ResolvingAlgebra& A,
                                              std::uint32_t weight_cap = 8) {
  for (std::size_t i = 0; i + 1 < A.ngens(); ++i)
    if (A.gen(i).degree < A.gen(i + 1).degree)
      throw std::invalid_argument(
          "diagonal_resolution: generators must be ordered by non-increasing degree");
  if (A.base_count() != 0)
    throw std::invalid_argument("diagonal_resolution: base generators are not supported");

  TensorResult t = tensor(A, A);
  DiagonalResolution out;
  out.ys.assign(A.ngens(), 0);
  out.zs.assign(A.ngens(), 0);
  for (GenId g = 0; g < A.ngens(); ++g) {
    out.ys[g] = g;
    out.zs[g] = static_cast<GenId>(A.ngens() + g);
  }

  ResolvingAlgebra E = t.prod;
  std::vector<Poly> yimg, zimg;  // x_j -> y_j and x_j -> z_j
  for (GenId g = 0; g < A.ngens(); ++g) {
    yimg.push_back(E.generator(out.ys[g]));
    zimg.push_back(E.generator(out.zs[g]));
  }

  std::vector<Poly> dval;  // delta images, one per generator of E as it grows
  for (GenId g = 0; g < A.ngens(); ++g) dval.push_back(A.generator(g));
  for (GenId g = 0; g < A.ngens(); ++g) dval.push_back(A.generator(g));

  for (GenId i = 0; i < A.ngens(); ++i) {
    const std::string tag = "cell " + std::to_string(i + 1) + " (" + A.gen(i).name + ")";
    Poly fy = A.d_gen(i).substitute(E.scope(), yimg);
    Poly fz = A.d_gen(i).substitute(E.scope(), zimg);
    EscalatedSolve h = bounded_d_solve_escalating(E, fy - fz, weight_cap, "diagonal " + tag);

    GenId cell = E.add_gen(fresh_name(E.scope(), "xi" + std::to_string(i + 1)),
                           A.gen(i).degree - 1);
    E.set_d(cell, E.generator(out.zs[i]) - E.generator(out.ys[i]) + h.value);
    if (!E.d(E.d_gen(cell)).is_zero())
      throw std::logic_error("diagonal_resolution: d^2 broke at " + tag);

    Poly dh = h.value.substitute(A.scope(), dval);
    EscalatedSolve g = bounded_d_solve_escalating(A, dh, weight_cap, "delta image of " + tag);
    dval.push_back(g.value);
    out.witnesses.push_back({cell, h.value, g.value, std::max(h.cap_used, g.cap_used)});
  }

  out.ext = E;
  out.delta = DGAMorphism{E, A, std::move(dval)};
  out.left = DGAMorphism{A, E, yimg};
  out.right = DGAMorphism{A, E, zimg};
  if (auto rep = out.ext.validate(); !rep)
    throw std::logic_error("diagonal_resolution: " + rep.violations.front());
  if (auto rep = out.delta.validate(); !rep)
    throw std::logic_error("diagonal_resolution: " + rep.violations.front());
  return out;
}

// ---------------------------------------------------------------------------
// Resolution of a morphism f : A -> B through the diagonal of A: the middle
// algebra is B with a free copy of A and the diagonal cells, the projection
// collapses the copy back through f.

struct MorphismResolution {
  ResolvingAlgebra ext;          // B (x) A with the diagonal cells
  DGAMorphism resolving;         // A -> ext, the free copy
  DGAMorphism incl;              // B -> ext
  DGAMorphism projection;        // ext -> B, a quasi-isomorphism
  std::vector<GenId> zs, cells;  // ids of the copy and of the cells
};

inline MorphismResolution resolve_morphism(const DGAMorphism& f, const DiagonalResolution& diag) {
  const ResolvingAlgebra& A = f.src;
  const ResolvingAlgebra& B = f.dst;
  if (!(diag.delta.dst == A))
    throw std::invalid_argument("resolve_morphism: diagonal data is for a different algebra");

  TensorResult t = tensor(B, A);
  MorphismResolution out;
  ResolvingAlgebra E = t.prod;
  for (GenId g = 0; g < A.ngens(); ++g)
    out.zs.push_back(static_cast<GenId>(B.ngens() + g));

  // images of the diagonal scope inside E: y_j -> f(x_j), z_j -> the copy,
  // cells appended as they appear
  std::vector<Poly> into_e;
  for (GenId g = 0; g < A.ngens(); ++g) into_e.push_back(f.val[g].substitute(E.scope(), t.incl_left.val));
  for (GenId g = 0; g < A.ngens(); ++g) into_e.push_back(E.generator(out.zs[g]));

  // images of E inside B for the projection: B identically, the copy via f,
  // cells via the persisted delta witnesses
  std::vector<Poly> proj;
  for (GenId g = 0; g < B.ngens(); ++g) proj.push_back(B.generator(g));
  for (GenId g = 0; g < A.ngens(); ++g) proj.push_back(f.val[g]);

  for (GenId i = 0; i < A.ngens(); ++i) {
    const DiagonalWitness& w = diag.witnesses[i];
    GenId cell = E.add_gen(fresh_name(E.scope(), diag.ext.gen(w.cell).name),
                           A.gen(i).degree - 1);
    out.cells.push_back(cell);
    Poly h = w.h.substitute(E.scope(), into_e);
    E.set_d(cell, E.generator(out.zs[i]) - f.val[i].substitute(E.scope(), t.incl_left.val) + h);
    into_e.push_back(E.generator(cell));
    proj.push_back(w.g.substitute(B.scope(), f.val));
  }

  out.ext = E;
  out.resolving = DGAMorphism{A, E, {}};
  for (GenId g = 0; g < A.ngens(); ++g) out.resolving.val.push_back(E.generator(out.zs[g]));
  out.incl = DGAMorphism{B, E, {}};
  for (GenId g = 0; g < B.ngens(); ++g) out.incl.val.push_back(E.generator(g));
  out.projection = DGAMorphism{E, B, std::move(proj)};
  if (auto rep = out.ext.validate(); !rep)
    throw std::logic_error("resolve_morphism: " + rep.violations.front());
  if (auto rep = out.resolving.validate(); !rep)
    throw std::logic_error("resolve_morphism: " + rep.violations.front());
  if (auto rep = out.projection.validate(); !rep)
    throw std::logic_error("resolve_morphism: " + rep.violations.front());
  return out;
}

// ---------------------------------------------------------------------------
// Derived tensor product of f : A -> B and g : A -> C, using the diagonal
// witnesses of A: one cell per A-generator bridges the two images.

struct DerivedTensor {
  ResolvingAlgebra R;          // B (x) C with one cell per A-generator
  DGAMorphism from_b, from_c;  // the tensor inclusions
  DGAMorphism via_b, via_c;    // A -> R through each factor
  std::vector<GenId> cells;
};

inline DerivedTensor derived_tensor(const DGAMorphism& f, const DGAMorphism& g,
                                    const DiagonalResolution& diag) {
  const ResolvingAlgebra& A = f.src;
  if (!(g.src == A)) throw std::invalid_argument("derived_tensor: the sources differ");
  if (!(diag.delta.dst == A))
    throw std::invalid_argument("derived_tensor: diagonal data is for a different algebra");

  TensorResult t = tensor(f.dst, g.dst);
  DerivedTensor out;
  ResolvingAlgebra R = t.prod;

  std::vector<Poly> bimg, cimg;  // f and g pushed into the tensor factors
  for (GenId a = 0; a < A.ngens(); ++a) {
    bimg.push_back(f.val[a].substitute(R.scope(), t.incl_left.val));
    cimg.push_back(g.val[a].substitute(R.scope(), t.incl_right.val));
  }

  // images of the diagonal scope inside R: y -> b, z -> c, cells as added
  std::vector<Poly> into_r = bimg;
  into_r.insert(into_r.end(), cimg.begin(), cimg.end());

  for (GenId i = 0; i < A.ngens(); ++i) {
    const DiagonalWitness& w = diag.witnesses[i];
    GenId cell = R.add_gen(fresh_name(R.scope(), diag.ext.gen(w.cell).name),
                           A.gen(i).degree - 1);
    out.cells.push_back(cell);
    Poly h = w.h.substitute(R.scope(), into_r);
    R.set_d(cell, cimg[i].rescope(R.scope()) - bimg[i].rescope(R.scope()) + h);
    if (!R.d(R.d_gen(cell)).is_zero())
      throw std::logic_error("derived_tensor: d^2 broke at cell " + std::to_string(i + 1));
    into_r.push_back(R.generator(cell));
  }

  out.R = R;
  out.from_b = DGAMorphism{f.dst, R, {}};
  for (GenId b = 0; b < f.dst.ngens(); ++b) out.from_b.val.push_back(R.generator(b));
  out.from_c = DGAMorphism{g.dst, R, {}};
  for (GenId c = 0; c < g.dst.ngens(); ++c)
    out.from_c.val.push_back(R.generator(static_cast<GenId>(f.dst.ngens() + c)));
  out.via_b = compose(f, out.from_b);
  out.via_c = compose(g, out.from_c);
  if (auto rep = out.R.validate(); !rep)
    throw std::logic_error("derived_tensor: " + rep.violations.front());
  return out;
}

}  // namespace dgres
