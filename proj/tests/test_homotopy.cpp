// Polynomial forms on simplices, horn filling, the linearization maps and
// their homotopy/concatenation/boundary witnesses, obstruction classes, and
// transport of derivation cohomology along paths.

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>

#include "dgres/homotopy.hpp"

using namespace dgres;

namespace {

struct Rng {
  std::mt19937_64 eng{46290815u};
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
};

// Two odd lines: the smallest ambient with interesting classes.
ResolvingAlgebra lambda2() {
  ResolvingAlgebra A;
  A.add_gen("u", -1);
  A.add_gen("v", -1);
  return A;
}

// Acyclic ambient: d(w) = u.
ResolvingAlgebra contractible() {
  ResolvingAlgebra A;
  GenId u = A.add_gen("u", -2);
  GenId w = A.add_gen("w", -3);
  A.set_d(w, A.generator(u));
  return A;
}

Poly mono(const ResolvingAlgebra& A, GenId g, std::uint32_t e = 1) {
  return Poly::term(A.scope(), Rat(1), Monomial::gen(g, e));
}

// Random form of pure total degree n, with t-exponents bounded by tmax.
SimplexForm random_form(Rng& rng, const ResolvingAlgebra& A, int ell, int n,
                        std::uint32_t tmax = 2) {
  SimplexForm f(ell);
  int terms = rng.pick(1, 4);
  for (int i = 0; i < terms; ++i) {
    std::uint32_t mask = static_cast<std::uint32_t>(rng.pick(0, (1 << ell) - 1));
    int adeg = n - std::popcount(mask);
    auto monos = enumerate_monomials(A, MonoSpec{adeg, {}, {}});
    if (monos.empty()) continue;
    FormKey k;
    k.t.assign(static_cast<std::size_t>(ell), 0);
    std::uint32_t budget = tmax;
    for (int j = 0; j < ell && budget > 0; ++j) {
      std::uint32_t e = static_cast<std::uint32_t>(rng.pick(0, static_cast<int>(budget)));
      k.t[static_cast<std::size_t>(j)] = e;
      budget -= e;
    }
    k.dt = mask;
    Rat c(rng.pick(-3, 3));
    if (c == 0) continue;
    f.add_term(k, Poly::term(A.scope(), c, monos[static_cast<std::size_t>(
                                             rng.pick(0, static_cast<int>(monos.size()) - 1))]));
  }
  return f;
}

}  // namespace

TEST_CASE("form products are graded-commutative and associative", "[simplex]") {
  Rng rng;
  ResolvingAlgebra A = lambda2();
  for (int trial = 0; trial < 1000; ++trial) {
    int ell = rng.pick(1, 3);
    int na = rng.pick(-2, 1), nb = rng.pick(-2, 1);
    SimplexForm a = random_form(rng, A, ell, na);
    SimplexForm b = random_form(rng, A, ell, nb);
    SimplexForm ab = a * b;
    SimplexForm ba = b * a;
    if ((na * nb) % 2 != 0) ba = -ba;
    CHECK(ab == ba);
    SimplexForm c = random_form(rng, A, ell, rng.pick(-1, 1));
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("the simplex differential squares to zero and is a derivation", "[simplex]") {
  Rng rng;
  ResolvingAlgebra A = lambda2();
  GenId w = A.add_gen("w", -3);
  A.set_d(w, A.generator(0) * A.generator(1));  // d(w) = uv: genuine interaction
  for (int trial = 0; trial < 1000; ++trial) {
    int ell = rng.pick(1, 3);
    int na = rng.pick(-3, 1);
    SimplexForm a = random_form(rng, A, ell, na);
    CHECK(a.total_d(A).total_d(A).is_zero());
    SimplexForm b = random_form(rng, A, ell, rng.pick(-3, 1));
    SimplexForm lhs = (a * b).total_d(A);
    SimplexForm rhs = a.total_d(A) * b;
    SimplexForm tail = a * b.total_d(A);
    if (na % 2 != 0) tail = -tail;
    CHECK(lhs == rhs + tail);
  }
}

TEST_CASE("faces commute with the differential and with each other", "[simplex]") {
  Rng rng;
  ResolvingAlgebra A = lambda2();
  for (int trial = 0; trial < 400; ++trial) {
    int ell = rng.pick(1, 3);
    SimplexForm a = random_form(rng, A, ell, rng.pick(-2, 1));
    int i = rng.pick(0, ell);
    CHECK(a.total_d(A).face(i) == a.face(i).total_d(A));
    if (ell >= 2) {
      int j = rng.pick(1, ell);  // restriction form of a second face
      SimplexForm once = a.restrict_zero(j);
      CHECK(once.restrict_zero(j) == once);
    }
  }
}

TEST_CASE("volume, cone, and shifted cone forms obey their identities", "[simplex]") {
  for (int ell = 1; ell <= 4; ++ell) {
    SimplexForm omega = omega_form(ell);
    SimplexForm tau = tau_form(ell);
    SimplexForm sigma = sigma_form(ell);
    CHECK(omega.t_differential().is_zero());
    CHECK(tau.t_differential() == omega);
    CHECK(sigma.t_differential() == omega);
    for (int i = 0; i <= ell; ++i) CHECK(omega.face(i).is_zero());
    for (int i = 1; i <= ell; ++i) CHECK(tau.face(i).is_zero());
    CHECK(tau.face(0) == omega_form(ell - 1));
    for (int i = 0; i <= ell - 1; ++i) CHECK(sigma.face(i).is_zero());
    SimplexForm last = sigma.face(ell);
    if (ell % 2 != 0) last = -last;
    CHECK(last == omega_form(ell - 1));
  }
  // Dimension one, explicitly: tau = t1 and sigma = t1 - 1.
  SimplexForm t1 = SimplexForm::coord(1, 1);
  CHECK(tau_form(1) == t1);
  CHECK(sigma_form(1) == t1 - SimplexForm::constant(1, Poly(1)));
}

TEST_CASE("normalized classes and their coboundary shift", "[simplex]") {
  ResolvingAlgebra A = lambda2();
  Poly uv = A.generator(0) * A.generator(1);
  for (int ell = 1; ell <= 3; ++ell) {
    SimplexForm cls = normalized_class(A, uv, ell);
    CHECK(cls.total_d(A).is_zero());
    for (int i = 0; i <= ell; ++i) CHECK(cls.face(i).is_zero());
  }
  CHECK(normalized_class(A, uv, 0) == SimplexForm::constant(0, uv));  // a point: no twist

  // A nonzero shift: b = w with d(w) = u.
  ResolvingAlgebra C = contractible();
  for (int ell = 1; ell <= 2; ++ell) {
    SimplexForm psi = normalized_shift_witness(C, C.generator(1), ell);
    CHECK(psi.total_d(C).is_zero());
    for (int i = 0; i <= ell; ++i) CHECK(psi.face(i).is_zero());
    SimplexForm last = psi.face(ell + 1);
    if ((ell + 1) % 2 != 0) last = -last;
    CHECK(last == omega_form(ell) * SimplexForm::constant(ell, C.generator(0)));
  }
}

TEST_CASE("horn filling solves for the missing face", "[horn]") {
  ResolvingAlgebra A = lambda2();
  Poly uv = A.generator(0) * A.generator(1);

  SECTION("the zero form fills to zero") {
    CHECK(horn_fill(A, SimplexForm(1), 0).is_zero());
    CHECK(horn_fill(A, SimplexForm(2), 1).is_zero());
  }

  SECTION("a closed multiple of the volume form fills to the cone") {
    SimplexForm eta = omega_form(1) * SimplexForm::constant(1, uv);
    SimplexForm theta = horn_fill(A, eta, 0);
    CHECK(theta == SimplexForm::coord(1, 1) * SimplexForm::constant(1, uv));
  }

  SECTION("preconditions are enforced") {
    SimplexForm open_form = SimplexForm::coord(1, 1);  // not closed
    CHECK_THROWS_AS(horn_fill(A, open_form, 0), std::invalid_argument);
    SimplexForm off_horn = SimplexForm::constant(2, uv);  // no vanishing faces
    CHECK_THROWS_AS(horn_fill(A, off_horn, 0), std::invalid_argument);
  }
}

TEST_CASE("random closed horns always fill exactly", "[horn]") {
  Rng rng;
  ResolvingAlgebra A = lambda2();
  auto run = [&](int ell, int missing, int trials, std::uint32_t tmax) {
    for (int trial = 0; trial < trials; ++trial) {
      SimplexForm g = random_form(rng, A, ell, rng.pick(-1, 1), tmax);
      for (int i = 1; i <= ell; ++i) g = g - g.restrict_zero(i);
      SimplexForm eta = g.total_d(A);
      if (missing != 0) eta = eta.swap_vertex(missing);
      SimplexForm theta = horn_fill(A, eta, missing);
      CHECK(theta.total_d(A) == eta);
      for (int i = 0; i <= ell; ++i)
        if (i != missing) CHECK(theta.face(i).is_zero());
    }
  };
  run(1, 0, 30, 2);
  run(1, 1, 30, 2);
  run(2, 0, 25, 2);
  run(2, 1, 25, 2);
  run(2, 2, 25, 2);
  run(3, 0, 4, 1);
  run(3, 2, 4, 1);
}

TEST_CASE("extension from the final face", "[horn]") {
  ResolvingAlgebra A = lambda2();
  Poly uv = A.generator(0) * A.generator(1);

  SECTION("zero extends to zero") { CHECK(extend_from_face(A, SimplexForm(1)).is_zero()); }

  SECTION("volume multiples extend") {
    for (int m = 1; m <= 3; ++m) {
      SimplexForm psi = omega_form(m) * SimplexForm::constant(m, uv);
      SimplexForm big = extend_from_face(A, psi);
      CHECK(big.face(m + 1) == psi);
      for (int i = 0; i <= m; ++i) CHECK(big.face(i).is_zero());
    }
  }

  SECTION("a point extends along the interval") {
    SimplexForm psi = SimplexForm::constant(0, uv);
    SimplexForm big = extend_from_face(A, psi);
    CHECK(big.face(1) == psi);
    CHECK(big.face(0).is_zero());
  }

  SECTION("random boundary-free forms extend") {
    Rng rng;
    for (int m = 1; m <= 2; ++m) {
      for (int trial = 0; trial < 30; ++trial) {
        SimplexForm psi(m);
        int parts = rng.pick(1, 3);
        for (int p = 0; p < parts; ++p) {
          SimplexForm tpart = SimplexForm::constant(m, Poly(Rat(rng.pick(-3, 3))));
          for (int j = 1; j <= m; ++j)
            tpart = tpart * SimplexForm::coord(m, j).pow(
                                static_cast<std::uint32_t>(rng.pick(0, 2)));
          Poly coeff = (rng.pick(0, 1) != 0) ? uv : A.generator(static_cast<GenId>(rng.pick(0, 1)));
          psi = psi + tpart * omega_form(m) * SimplexForm::constant(m, coeff);
        }
        SimplexForm big = extend_from_face(A, psi);
        CHECK(big.face(m + 1) == psi);
        for (int i = 0; i <= m; ++i) CHECK(big.face(i).is_zero());
      }
    }
  }
}

namespace {

// One free generator x in the given degree, mapped to zero.
struct OneGen {
  ResolvingAlgebra B;
  ResolvingAlgebra A;
  DGAMorphism P;
  OneGen(int degree, ResolvingAlgebra ambient) : A(std::move(ambient)) {
    B.add_gen("x", degree);
    P = DGAMorphism{B, A, {Poly()}};
  }
  Derivation der(int n, Poly value) const { return Derivation{&B, &A, &P, n, {std::move(value)}}; }
};

// Four odd lines, enough room for products of length four.
ResolvingAlgebra lambda4() {
  ResolvingAlgebra A;
  A.add_gen("u", -1);
  A.add_gen("v", -1);
  A.add_gen("p", -1);
  A.add_gen("q", -1);
  return A;
}

}  // namespace

TEST_CASE("linearization in positive dimensions", "[xi]") {
  OneGen W(-1, lambda2());
  Poly uv = W.A.generator(0) * W.A.generator(1);

  SECTION("a closed derivation becomes a loop at the base point") {
    SimplexMorphism h = xi_ell(W.der(-1, uv), 1);
    CHECK(h.val[0] == SimplexForm::d_coord(1, 1) * SimplexForm::constant(1, uv));
    CHECK(homotopy_check(h, W.P, W.P).ok);
  }

  SECTION("the zero derivation gives the constant simplex") {
    for (int ell = 1; ell <= 3; ++ell)
      CHECK(xi_ell(W.der(-ell, Poly()), ell) == constant_simplex_morphism(W.P, ell));
  }

  SECTION("degree mismatches are rejected") {
    CHECK_THROWS_AS(xi_ell(W.der(-1, uv), 2), std::invalid_argument);
    CHECK_THROWS_AS(xi_ell(W.der(-1, W.A.generator(0)), 1), std::invalid_argument);
  }

  SECTION("unclosed derivations are rejected") {
    ResolvingAlgebra C = contractible();
    OneGen V(-4, C);
    Poly w = C.generator(1);  // d(w) = u
    CHECK_THROWS_AS(xi_ell(V.der(-1, w), 1), std::invalid_argument);
  }
}

TEST_CASE("linearized loops carry the normalized class of their derivation", "[xi]") {
  ResolvingAlgebra A = lambda4();
  for (int ell = 1; ell <= 3; ++ell) {
    OneGen W(-1, A);
    Poly value(Rat(1));
    for (GenId g = 0; g <= static_cast<GenId>(ell); ++g) value = value * W.A.generator(g);
    SimplexMorphism h = xi_ell(W.der(-ell, value), ell);
    SimplexForm reduced = h.val[0] - SimplexForm::constant(ell, W.P.val[0]);
    CHECK(reduced == normalized_class(W.A, value, ell));
  }
}

TEST_CASE("degree-zero linearization", "[xi]") {
  SECTION("zero maps to the base point") {
    OneGen W(-1, lambda2());
    CHECK(xi_zero(W.der(0, Poly())).val == W.P.val);
  }

  SECTION("a closed degree-zero derivation shifts the morphism") {
    ResolvingAlgebra A;
    A.add_gen("u", -1);
    OneGen W(-1, A);
    DGAMorphism h = xi_zero(W.der(0, W.A.generator(0)));
    CHECK(h.val[0] == W.A.generator(0));
    CHECK(h.validate().ok);
  }

  SECTION("generator differentials must land in the base") {
    ResolvingAlgebra B;
    GenId u = B.add_gen("u", -1);
    GenId x = B.add_gen("x", -2);
    B.set_d(x, B.generator(u));
    ResolvingAlgebra A = contractible();
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Derivation D{&B, &A, &P, 0, {Poly(), Poly()}};
    CHECK_THROWS_AS(xi_zero(D), std::invalid_argument);
  }
}

TEST_CASE("paths between shifted degree-zero morphisms", "[xi]") {
  ResolvingAlgebra A = contractible();  // u in degree -2, d(w) = u
  OneGen W(-2, A);
  Poly u = A.generator(0), w = A.generator(1);
  Derivation D = W.der(0, u);
  Derivation E = W.der(-1, w);
  SimplexMorphism phi = xi_zero_homotopy(D, E);
  // d(E) sends x to u, so the far end is x -> 2u.
  CHECK(phi.face(0).as_morphism().val[0] == u + u);
  CHECK(phi.face(1).as_morphism().val[0] == u);
  CHECK(homotopy_check(phi, xi_zero(derivation_sum(D, E.differential())), xi_zero(D)).ok);
}

TEST_CASE("prism witnesses connect shifted linearizations", "[xi]") {
  SECTION("dimension one") {
    ResolvingAlgebra A;
    A.add_gen("u", -1);
    A.add_gen("v", -1);
    A.add_gen("p", -1);
    ResolvingAlgebra B;
    GenId y = B.add_gen("y", -1);
    GenId x = B.add_gen("x", -2);
    B.set_d(x, B.generator(y));
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Poly uvp = A.generator(0) * A.generator(1) * A.generator(2);
    Derivation D{&B, &A, &P, -1, {Poly(), uvp}};
    Derivation E{&B, &A, &P, -2, {uvp, Poly()}};
    SimplexMorphism phi = xi_homotopy_witness(D, E, 1);
    CHECK(phi.ell == 2);
    // d(E) cancels D on x, so the far end is the constant simplex.
    SimplexMorphism far{B, A, 1, {prism_end(phi.val[0], true), prism_end(phi.val[1], true)}};
    CHECK(far == constant_simplex_morphism(P, 1));
  }

  SECTION("dimension two") {
    ResolvingAlgebra A = lambda4();
    ResolvingAlgebra B;
    GenId y = B.add_gen("y", -1);
    GenId x = B.add_gen("x", -2);
    B.set_d(x, B.generator(y));
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Poly prod(Rat(1));
    for (GenId g = 0; g < 4; ++g) prod = prod * A.generator(g);
    Derivation D{&B, &A, &P, -2, {Poly(), prod}};
    Derivation E{&B, &A, &P, -3, {prod, Poly()}};
    SimplexMorphism phi = xi_homotopy_witness(D, E, 2);
    SimplexMorphism far{B, A, 2, {prism_end(phi.val[0], true), prism_end(phi.val[1], true)}};
    CHECK(far == xi_ell(derivation_sum(D, E.differential()), 2));
    CHECK(!(far == xi_ell(D, 2)));  // the shift genuinely moves the end
  }
}

TEST_CASE("concatenation composes standard forms", "[concat]") {
  ResolvingAlgebra A;
  A.add_gen("a", -2);
  OneGen W(-2, A);
  Poly a2 = mono(W.A, 0, 2);

  SECTION("two-dimensional loops add") {
    SimplexMorphism h = xi_ell(W.der(-2, a2), 2);
    SimplexMorphism hp = xi_ell(W.der(-2, a2 + a2 + a2), 2);
    ConcatWitness cw = concat_witness(h, hp);
    CHECK(cw.left == h);
    CHECK(cw.right == hp);
    CHECK(cw.composite == xi_ell(W.der(-2, a2 * Rat(4)), 2));
    CHECK(cw.phi.validate().ok);
  }

  SECTION("composing with the constant loop changes nothing") {
    SimplexMorphism h = xi_ell(W.der(-2, a2), 2);
    SimplexMorphism triv = xi_ell(W.der(-2, Poly()), 2);
    CHECK(concat_witness(h, triv).composite == h);
    CHECK(concat_witness(triv, h).composite == h);
  }

  SECTION("non-standard inputs are rejected") {
    SimplexMorphism h = xi_ell(W.der(-2, a2), 2);
    SimplexMorphism bad = h;
    bad.val[0] = bad.val[0] + SimplexForm::coord(2, 1) * SimplexForm::constant(2, a2);
    CHECK_THROWS_AS(concat_witness(h, bad), std::invalid_argument);
    CHECK_THROWS_AS(concat_witness(xi_ell(W.der(-1, Poly()), 1), xi_ell(W.der(-1, Poly()), 1)),
                    std::invalid_argument);  // dimension one needs the relative form
  }
}

TEST_CASE("relative concatenation in dimension one", "[concat]") {
  SECTION("free generator over the ground field") {
    OneGen W(-1, lambda2());
    Poly uv = W.A.generator(0) * W.A.generator(1);
    SimplexMorphism h = xi_ell(W.der(-1, uv), 1);
    SimplexMorphism hp = xi_ell(W.der(-1, -(uv + uv)), 1);
    ConcatWitness cw = concat_witness_rel(h, hp, 0);
    CHECK(cw.left == h);
    CHECK(cw.right == hp);
    CHECK(cw.composite == xi_ell(W.der(-1, -uv), 1));
  }

  SECTION("a genuine subalgebra prefix") {
    ResolvingAlgebra A = lambda2();
    Poly uv = A.generator(0) * A.generator(1);
    ResolvingAlgebra B;
    B.add_gen("y", -1);
    B.add_gen("x", -1);
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Derivation D{&B, &A, &P, -1, {uv, Poly()}};
    Derivation Dp{&B, &A, &P, -1, {Poly(), uv}};
    ConcatWitness cw = concat_witness_rel(xi_ell(D, 1), xi_ell(Dp, 1), 1);
    CHECK(cw.composite == xi_ell(derivation_sum(D, Dp), 1));

    // The second loop must vanish on the prefix.
    CHECK_THROWS_AS(concat_witness_rel(xi_ell(Dp, 1), xi_ell(D, 1), 1), std::invalid_argument);
  }
}

TEST_CASE("boundary lifts produce the connecting derivation", "[boundary]") {
  SECTION("dimension one") {
    ResolvingAlgebra B;
    GenId u = B.add_gen("u", -1);
    GenId x = B.add_gen("x", -2);
    B.set_d(x, B.generator(u));
    ResolvingAlgebra A;
    A.add_gen("a", -2);
    Poly a = A.generator(0);
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Derivation lift{&B, &A, &P, -1, {a, Poly()}};
    BoundaryWitness bw = boundary_witness(lift, 1, 1);
    CHECK(bw.delta.val[x] == a);
    CHECK(bw.delta.val[u].is_zero());
    CHECK(bw.face0.as_morphism().val[x] == a);
    CHECK(bw.lifted.val[x] == SimplexForm::coord(1, 1) * SimplexForm::constant(1, a));
    CHECK(bw.lifted.val[u] == SimplexForm::d_coord(1, 1) * SimplexForm::constant(1, a));
  }

  SECTION("dimension two") {
    ResolvingAlgebra B;
    GenId u = B.add_gen("u", -2);
    GenId x = B.add_gen("x", -3);
    B.set_d(x, B.generator(u));
    ResolvingAlgebra A;
    A.add_gen("a", -2);
    Poly a2 = mono(A, 0, 2);
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Derivation lift{&B, &A, &P, -2, {a2, Poly()}};
    BoundaryWitness bw = boundary_witness(lift, 1, 2);
    CHECK(bw.delta.val[x] == -a2);
    CHECK(bw.face0 == xi_ell(bw.delta, 1));
  }

  SECTION("vanishing pairing gives the constant face") {
    ResolvingAlgebra B;
    B.add_gen("u", -1);
    B.add_gen("x", -2);  // dx = 0: the pairing D(dx) vanishes
    ResolvingAlgebra A;
    A.add_gen("a", -2);
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Derivation lift{&B, &A, &P, -1, {A.generator(0), Poly()}};
    BoundaryWitness bw = boundary_witness(lift, 1, 1);
    CHECK(bw.face0.as_morphism().val == P.val);
  }

  SECTION("the restriction must be closed") {
    ResolvingAlgebra B;
    GenId u = B.add_gen("u", -2);
    GenId x = B.add_gen("x", -3);
    B.set_d(x, B.generator(u));
    ResolvingAlgebra A = contractible();  // d(w) = u, so w is not closed
    DGAMorphism P{B, A, {Poly(), Poly()}};
    Derivation lift{&B, &A, &P, -1, {A.generator(1), Poly()}};
    CHECK_THROWS_AS(boundary_witness(lift, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("pairing classes detect obstruction cycles", "[obstruction]") {
  ResolvingAlgebra A = lambda2();
  Poly uv = A.generator(0) * A.generator(1);
  ResolvingAlgebra B;
  GenId y = B.add_gen("y", -1);
  GenId x = B.add_gen("x", -2);
  B.set_d(x, B.generator(y));
  DGAMorphism P{B, A, {Poly(), Poly()}};

  SECTION("a nontrivial class") {
    Derivation D{&B, &A, &P, -1, {uv, Poly()}};
    SliceClass cls = xi_P_class(D, x);
    CHECK(cls.degree == -2);
    CHECK_FALSE(cls.is_zero());
  }

  SECTION("the zero derivation has the zero class") {
    Derivation D{&B, &A, &P, -1, {Poly(), Poly()}};
    CHECK(xi_P_class(D, x).is_zero());
  }

  SECTION("a generator with zero differential pairs to zero") {
    ResolvingAlgebra Bf;
    Bf.add_gen("y", -1);
    GenId xf = Bf.add_gen("x", -2);
    DGAMorphism Pf{Bf, A, {Poly(), Poly()}};
    Derivation D{&Bf, &A, &Pf, -1, {uv, Poly()}};
    CHECK(xi_P_class(D, xf).is_zero());
  }

  SECTION("ambients with degree-zero generators are unsupported") {
    ResolvingAlgebra A0;
    A0.add_gen("s", 0);
    A0.add_gen("t", -1);
    DGAMorphism P0{B, A0, {Poly(), Poly()}};
    Derivation D{&B, &A0, &P0, -1, {A0.generator(1) * A0.generator(1), Poly()}};
    D.val[y] = Poly();  // odd square collapses; keep the shape simple
    CHECK_THROWS_AS(xi_P_class(D, x), std::invalid_argument);
  }
}

TEST_CASE("extension obstructions and produced extensions", "[obstruction]") {
  SECTION("degree-zero target: the scalar decides") {
    ResolvingAlgebra B;
    GenId yg = B.add_gen("y", 0);
    GenId xig = B.add_gen("xi", -1);
    B.set_d(xig, B.generator(yg));
    ResolvingAlgebra A;  // just the ground field
    DGAMorphism f{B, A, {Poly(Rat(2)), Poly()}};
    ExtensionOutcome out = extension_obstruction(f, xig);
    CHECK(out.obstruction.degree == 0);
    CHECK_FALSE(out.obstruction.is_zero());
    CHECK_FALSE(out.extension.has_value());

    DGAMorphism f0{B, A, {Poly(), Poly()}};
    ExtensionOutcome ok = extension_obstruction(f0, xig);
    CHECK(ok.obstruction.is_zero());
    REQUIRE(ok.extension.has_value());
    CHECK(ok.extension->val[xig].is_zero());
    CHECK(ok.extension->validate().ok);
  }

  SECTION("an exact image yields a validated extension") {
    ResolvingAlgebra A = contractible();  // d(w) = u
    ResolvingAlgebra B;
    GenId z = B.add_gen("z", -2);
    GenId x = B.add_gen("x", -3);
    B.set_d(x, B.generator(z));
    DGAMorphism f{B, A, {A.generator(0), Poly()}};
    ExtensionOutcome out = extension_obstruction(f, x);
    CHECK(out.obstruction.is_zero());
    REQUIRE(out.extension.has_value());
    CHECK(out.extension->val[x] == A.generator(1));
    CHECK(out.extension->validate().ok);
  }

  SECTION("a nonzero class blocks the extension") {
    ResolvingAlgebra A = lambda2();
    ResolvingAlgebra B;
    GenId z = B.add_gen("z", -2);
    GenId x = B.add_gen("x", -3);
    B.set_d(x, B.generator(z));
    DGAMorphism f{B, A, {A.generator(0) * A.generator(1), Poly()}};
    ExtensionOutcome out = extension_obstruction(f, x);
    CHECK(out.obstruction.degree == -2);
    CHECK_FALSE(out.obstruction.is_zero());
    CHECK_FALSE(out.extension.has_value());
  }

  SECTION("a zero differential extends by zero") {
    ResolvingAlgebra A = lambda2();
    ResolvingAlgebra B;
    B.add_gen("z", -2);
    GenId x = B.add_gen("x", -3);
    DGAMorphism f{B, A, {A.generator(0) * A.generator(1), Poly()}};
    ExtensionOutcome out = extension_obstruction(f, x);
    CHECK(out.obstruction.is_zero());
    REQUIRE(out.extension.has_value());
    CHECK(out.extension->val[x].is_zero());
  }
}

namespace {

// A two-parameter source with one relation cell: d(xi) = yz.
struct TransportRig {
  ResolvingAlgebra B;
  ResolvingAlgebra A;
  DGAMorphism f;
  TransportRig() {
    B.add_gen("y", -1);
    B.add_gen("z", -1);
    GenId xi = B.add_gen("xi", -3);
    B.set_d(xi, B.generator(0) * B.generator(1));
    A = lambda2();
    f = DGAMorphism{B, A, {A.generator(0), Poly(), Poly()}};
  }
};

bool is_identity(const QMat& m, std::size_t n) {
  if (m.rows() != n || m.cols() != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.get(i, j) != (i == j ? Rat(1) : Rat(0))) return false;
  return true;
}

}  // namespace

TEST_CASE("derivation transport along paths", "[transport]") {
  TransportRig R;
  Poly uv = R.A.generator(0) * R.A.generator(1);

  SECTION("the constant path transports by the identity") {
    SimplexMorphism theta = constant_simplex_morphism(R.f, 1);
    TransportResult tr = der_transport(theta, 1);
    REQUIRE(tr.ok);
    CHECK(tr.dim_src == 2);
    CHECK(tr.dim_dst == 2);
    CHECK(is_identity(tr.matrix, 2));
  }

  SECTION("two self-paths give the same transport") {
    SimplexForm dtuv = SimplexForm::d_coord(1, 1) * SimplexForm::constant(1, uv);
    SimplexMorphism theta1{R.B, R.A, 1,
                           {SimplexForm::constant(1, R.f.val[0]) + dtuv, dtuv, SimplexForm(1)}};
    SimplexMorphism theta2{R.B, R.A, 1,
                           {SimplexForm::constant(1, R.f.val[0]), dtuv, SimplexForm(1)}};
    REQUIRE(homotopy_check(theta1, R.f, R.f).ok);
    REQUIRE(homotopy_check(theta2, R.f, R.f).ok);
    TransportResult t1 = der_transport(theta1, 1);
    TransportResult t2 = der_transport(theta2, 1);
    REQUIRE(t1.ok);
    REQUIRE(t2.ok);
    CHECK(is_identity(t1.matrix, 2));
    CHECK(is_identity(t2.matrix, 2));
  }

  SECTION("transports compose") {
    SimplexMorphism theta = constant_simplex_morphism(R.f, 1);
    TransportResult tr = der_transport(theta, 1);
    REQUIRE(tr.ok);
    QMat square(tr.matrix.rows(), tr.matrix.cols());
    for (std::size_t j = 0; j < tr.matrix.cols(); ++j) {
      QVec e(tr.matrix.cols(), Rat(0));
      e[j] = 1;
      QVec col = tr.matrix.apply(tr.matrix.apply(e));
      for (std::size_t i = 0; i < col.size(); ++i)
        if (col[i] != 0) square.set(i, j, col[i]);
    }
    CHECK(is_identity(square, 2));
  }

  SECTION("paths that raise the interval degree report truncation overflow") {
    ResolvingAlgebra B2;
    B2.add_gen("y", -2);
    B2.add_gen("z", -2);
    GenId xi = B2.add_gen("xi", -5);
    B2.set_d(xi, B2.generator(0) * B2.generator(1));
    ResolvingAlgebra A2 = contractible();  // u in -2, d(w) = u
    SimplexForm ramp = SimplexForm::coord(1, 1) * SimplexForm::constant(1, A2.generator(0)) +
                       SimplexForm::d_coord(1, 1) * SimplexForm::constant(1, A2.generator(1));
    SimplexMorphism theta{B2, A2, 1, {ramp, SimplexForm(1), SimplexForm(1)}};
    REQUIRE(theta.validate().ok);
    TransportResult tr = der_transport(theta, 1, 2);
    CHECK_FALSE(tr.ok);
    CHECK(tr.note.find("overflow") != std::string::npos);
  }

  SECTION("only 1-simplices are accepted") {
    SimplexMorphism flat = constant_simplex_morphism(R.f, 2);
    CHECK_THROWS_AS(der_transport(flat, 1), std::invalid_argument);
  }
}

TEST_CASE("randomized loop constructions always validate", "[xi]") {
  Rng rng;
  ResolvingAlgebra A = lambda4();
  for (int trial = 0; trial < 150; ++trial) {
    int ell = rng.pick(1, 3);
    OneGen W(-1, A);
    auto monos = enumerate_monomials(W.A, MonoSpec{-1 - ell, {}, {}});
    Poly value;
    for (auto& m : monos)
      if (rng.pick(0, 1) != 0) value += Poly::term(W.A.scope(), Rat(rng.pick(-3, 3)), m);
    Derivation D = W.der(-ell, value);
    SimplexMorphism h = xi_ell(D, ell);  // internal checks enforce chain + faces
    CHECK(h.validate().ok);
    SimplexMorphism base = constant_simplex_morphism(W.P, ell - 1);
    for (int i = 0; i <= ell; ++i) CHECK(h.face(i) == base);
  }
}
