// The bounded d-solver, diagonal resolutions, morphism resolutions, and
// derived tensor products, with their verdicts cross-checked by elimination.

#include <catch2/catch_amalgamated.hpp>

#include "dgres/constructions.hpp"
#include "dgres/criteria.hpp"

using namespace dgres;

namespace {

ResolvingAlgebra ground() { return {}; }

ResolvingAlgebra line(const std::string& name = "x") {
  ResolvingAlgebra A;
  A.add_gen(name, 0);
  return A;
}

ResolvingAlgebra dual_numbers_resolution() {
  ResolvingAlgebra A;
  GenId x = A.add_gen("x", 0);
  GenId xi = A.add_gen("xi", -1);
  A.set_d(xi, Poly::term(A.scope(), Rat(1), Monomial::gen(x, 2)));
  return A;
}

Poly mono(const ResolvingAlgebra& A, GenId g, std::uint32_t e = 1) {
  return Poly::term(A.scope(), Rat(1), Monomial::gen(g, e));
}

}  // namespace

TEST_CASE("bounded solver returns exact primitives", "[solve]") {
  ResolvingAlgebra A = dual_numbers_resolution();

  auto trivial = bounded_d_solve(A, Poly(), 4);
  REQUIRE(trivial);
  CHECK(trivial->is_zero());

  auto sol = bounded_d_solve(A, mono(A, 0, 2), 4);
  REQUIRE(sol);
  CHECK(*sol == A.generator(1));  // d(xi) = x^2 is the definitional solution

  CHECK_THROWS_AS(bounded_d_solve(A, A.generator(1), 4), std::invalid_argument);  // not closed
  CHECK_THROWS_AS(bounded_d_solve(A, A.generator(0) + A.generator(1), 4),
                  std::invalid_argument);  // not homogeneous
}

TEST_CASE("bounded solver bridges the two squares", "[solve]") {
  // y, z in degree 0 with odd primitives for their squares, plus a cell
  // with d(w) = z - y: the stage reached by the diagonal construction
  ResolvingAlgebra E;
  GenId y = E.add_gen("y", 0);
  GenId ey = E.add_gen("ey", -1);
  E.set_d(ey, mono(E, y, 2));
  GenId z = E.add_gen("z", 0);
  GenId ez = E.add_gen("ez", -1);
  E.set_d(ez, mono(E, z, 2));
  GenId w = E.add_gen("w", -1);
  E.set_d(w, E.generator(z) - E.generator(y));

  Poly target = mono(E, y, 2) - mono(E, z, 2);
  auto sol = bounded_d_solve(E, target, 2);
  REQUIRE(sol);
  CHECK(E.d(*sol) == target);

  auto again = bounded_d_solve(E, target, 2);
  REQUIRE(again);
  CHECK(*again == *sol);  // witnesses are reproducible
}

TEST_CASE("solver failure is scoped to the cap", "[solve]") {
  ResolvingAlgebra A = line();
  Poly x = A.generator(0);
  CHECK_FALSE(bounded_d_solve(A, x, 8));
  try {
    bounded_d_solve_escalating(A, x, 8, "probe");
    FAIL("expected a solver failure");
  } catch (const SolveFailure& e) {
    CHECK(std::string(e.what()).find("cap 32") != std::string::npos);
  }
}

TEST_CASE("diagonal resolution of the line", "[diagonal]") {
  auto dr = diagonal_resolution(line());
  REQUIRE(dr.ext.ngens() == 3);
  CHECK(dr.ext.gen(2).degree == -1);
  CHECK(dr.ext.d_gen(2) == dr.ext.generator(1) - dr.ext.generator(0));
  CHECK(dr.witnesses[0].h.is_zero());
  CHECK(dr.witnesses[0].g.is_zero());
  CHECK(gb::h0_compare(dr.delta).iso());
}

TEST_CASE("diagonal resolution of the dual-numbers resolution", "[diagonal]") {
  ResolvingAlgebra A = dual_numbers_resolution();
  auto dr = diagonal_resolution(A, 4);
  REQUIRE(dr.ext.ngens() == 6);
  CHECK(dr.ext.gen(4).degree == -1);
  CHECK(dr.ext.gen(5).degree == -2);

  // first cell bridges the coordinates
  CHECK(dr.ext.d_gen(4) == dr.ext.generator(2) - dr.ext.generator(0));

  // the second witness solves d(h) = x^2 - x'^2 exactly
  const Poly& h2 = dr.witnesses[1].h;
  CHECK(dr.ext.d(h2) == mono(dr.ext, 0, 2) - mono(dr.ext, 2, 2));

  // delta-compatibility of the witness pair
  CHECK(A.d(dr.witnesses[1].g) == dr.delta.apply(h2));

  // running twice gives identical witnesses
  auto dr2 = diagonal_resolution(A, 4);
  for (std::size_t i = 0; i < dr.witnesses.size(); ++i) {
    CHECK(dr.witnesses[i].h == dr2.witnesses[i].h);
    CHECK(dr.witnesses[i].g == dr2.witnesses[i].g);
  }
}

TEST_CASE("the collapse of the diagonal is a quasi-isomorphism", "[diagonal]") {
  ResolvingAlgebra A = dual_numbers_resolution();
  auto dr = diagonal_resolution(A, 4);
  auto q = is_qis(dr.delta, QisMode::at_points({origin_point(A)}, 4));
  CHECK(q.pass());
  CHECK(q.h0_surjective);
  CHECK(q.h0_injective);
}

TEST_CASE("both inclusions into the diagonal are quasi-isomorphisms", "[diagonal]") {
  ResolvingAlgebra A = dual_numbers_resolution();
  auto dr = diagonal_resolution(A, 4);
  REQUIRE(dr.left.validate());
  REQUIRE(dr.right.validate());
  auto pt = origin_point(dr.ext);
  CHECK(is_qis(dr.left, QisMode::at_points({pt}, 3)).pass());
  CHECK(is_qis(dr.right, QisMode::at_points({pt}, 3)).pass());
}

TEST_CASE("diagonal resolution in strictly negative degrees", "[diagonal]") {
  ResolvingAlgebra L;
  GenId x = L.add_gen("x", -2);
  GenId xi = L.add_gen("xi", -5);
  L.set_d(xi, mono(L, x, 2));
  auto dr = diagonal_resolution(L, 4);
  CHECK(dr.ext.gen(4).degree == -3);
  CHECK(dr.ext.gen(5).degree == -6);
  CHECK(dr.ext.d(dr.witnesses[1].h) == mono(dr.ext, 0, 2) - mono(dr.ext, 2, 2));
}

TEST_CASE("diagonal resolution edge cases", "[diagonal]") {
  auto dr = diagonal_resolution(ground());
  CHECK(dr.ext.ngens() == 0);
  CHECK(gb::h0_compare(dr.delta).iso());

  ResolvingAlgebra bad;
  bad.add_gen("a", -1);
  bad.add_gen("b", 0);
  CHECK_THROWS_AS(diagonal_resolution(bad), std::invalid_argument);
}

TEST_CASE("resolving the identity recovers the diagonal", "[resolve]") {
  ResolvingAlgebra A = dual_numbers_resolution();
  auto dr = diagonal_resolution(A, 4);
  auto mr = resolve_morphism(identity_morphism(A), dr);
  CHECK(mr.ext == dr.ext);
  CHECK(mr.projection.val == dr.delta.val);
  CHECK(mr.resolving.val == dr.right.val);
}

TEST_CASE("resolving the collapse of the line", "[resolve]") {
  ResolvingAlgebra A = line();
  auto dr = diagonal_resolution(A);
  DGAMorphism f{A, ground(), {Poly()}};
  REQUIRE(f.validate());
  auto mr = resolve_morphism(f, dr);
  REQUIRE(mr.ext.ngens() == 2);  // the free copy of x and one cell
  CHECK(mr.ext.d_gen(1) == mr.ext.generator(0));
  CHECK(is_qis(mr.projection, QisMode::h0_only()).pass());
}

TEST_CASE("resolving a morphism between distinct algebras validates", "[resolve]") {
  ResolvingAlgebra A = dual_numbers_resolution();
  auto dr = diagonal_resolution(A, 4);
  DGAMorphism f{A, ground(), {Poly(), Poly()}};
  REQUIRE(f.validate());
  auto mr = resolve_morphism(f, dr);
  CHECK(mr.ext.ngens() == 4);
  CHECK(is_qis(mr.projection, QisMode::h0_only()).pass());
}

TEST_CASE("derived tensor over the ground field is the plain tensor", "[tensor]") {
  auto dr = diagonal_resolution(ground());
  ResolvingAlgebra B = line("u");
  ResolvingAlgebra C = dual_numbers_resolution();
  DGAMorphism f{ground(), B, {}};
  DGAMorphism g{ground(), C, {}};
  auto dt = derived_tensor(f, g, dr);
  CHECK(dt.cells.empty());
  CHECK(dt.R == tensor(B, C).prod);
}

TEST_CASE("derived tensor of the identity square is the diagonal", "[tensor]") {
  ResolvingAlgebra A = dual_numbers_resolution();
  auto dr = diagonal_resolution(A, 4);
  auto id = identity_morphism(A);
  auto dt = derived_tensor(id, id, dr);
  CHECK(dt.R == dr.ext);
}

TEST_CASE("derived tensor collapse has the expected h0", "[tensor]") {
  ResolvingAlgebra A = line();
  auto dr = diagonal_resolution(A);
  DGAMorphism g{A, ground(), {Poly()}};
  auto dt = derived_tensor(identity_morphism(A), g, dr);
  REQUIRE(dt.R.ngens() == 2);
  CHECK(dt.R.d_gen(1) == -dt.R.generator(0));
  auto pres = gb::h0_presentation(dt.R);
  auto basis = gb::groebner(pres.vm.size(), pres.relations, gb::MonOrder::grevlex());
  REQUIRE(basis.elems().size() == 1);  // the ideal collapses to (x)
}

TEST_CASE("derived tensor generator count and Tor presentation", "[tensor]") {
  ResolvingAlgebra A = dual_numbers_resolution();
  auto dr = diagonal_resolution(A, 4);

  // B a renamed copy of A, C the ground field
  ResolvingAlgebra B;
  GenId u = B.add_gen("u", 0);
  GenId eu = B.add_gen("eu", -1);
  B.set_d(eu, mono(B, u, 2));
  DGAMorphism f{A, B, {B.generator(u), B.generator(eu)}};
  REQUIRE(f.validate());
  DGAMorphism g{A, ground(), {Poly(), Poly()}};
  REQUIRE(g.validate());

  auto dt = derived_tensor(f, g, dr);
  CHECK(dt.R.ngens() == A.ngens() + B.ngens() + 0);  // a + b + c generators
  REQUIRE(dt.from_b.validate());
  REQUIRE(dt.from_c.validate());
  REQUIRE(dt.via_b.validate());
  REQUIRE(dt.via_c.validate());

  // h0 of the construction vs the classical degree-0 tensor presentation
  auto pres = gb::h0_presentation(dt.R);
  auto gb_built = gb::groebner(pres.vm.size(), pres.relations, gb::MonOrder::grevlex());

  std::vector<gb::CPolyData> classical;
  for (GenId gg = 0; gg < B.ngens(); ++gg)
    if (B.gen(gg).degree == -1 && !B.d_gen(gg).is_zero())
      classical.push_back(gb::to_cpoly(dt.from_b.apply(B.d_gen(gg)), pres.vm));
  for (GenId a : A.degree0_gens())
    classical.push_back(
        gb::to_cpoly(dt.via_b.val[a] - dt.via_c.val[a], pres.vm));
  auto gb_classical = gb::groebner(pres.vm.size(), classical, gb::MonOrder::grevlex());

  REQUIRE(gb_built.elems().size() == gb_classical.elems().size());
  for (std::size_t i = 0; i < gb_built.elems().size(); ++i)
    CHECK(gb_built.elems()[i] == gb_classical.elems()[i]);
}

TEST_CASE("derived tensor is symmetric up to renaming", "[tensor]") {
  ResolvingAlgebra A = line();
  auto dr = diagonal_resolution(A);
  ResolvingAlgebra B = line("u"), C = line("v");
  DGAMorphism f{A, B, {B.generator(0)}};
  DGAMorphism g{A, C, {C.generator(0)}};

  auto d1 = derived_tensor(f, g, dr);
  auto d2 = derived_tensor(g, f, dr);

  // align the variables of the swapped construction as (u, v)
  auto pres1 = gb::h0_presentation(d1.R);
  auto gb1 = gb::groebner(pres1.vm.size(), pres1.relations, gb::MonOrder::grevlex());

  auto vm2 = gb::VarMap::over(d2.R.scope(), {1, 0});  // u sits second in C (x) B
  std::vector<gb::CPolyData> rel2;
  for (GenId gg = 0; gg < d2.R.ngens(); ++gg)
    if (d2.R.gen(gg).degree == -1 && !d2.R.d_gen(gg).is_zero())
      rel2.push_back(gb::to_cpoly(d2.R.d_gen(gg), vm2));
  auto gb2 = gb::groebner(vm2.size(), rel2, gb::MonOrder::grevlex());

  REQUIRE(gb1.elems().size() == gb2.elems().size());
  for (std::size_t i = 0; i < gb1.elems().size(); ++i)
    CHECK(gb1.elems()[i] == gb2.elems()[i]);
}
