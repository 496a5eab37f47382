#include <catch2/catch_amalgamated.hpp>
#include <numeric>

#include "dgres/algebra.hpp"
#include "dgres/algebra_ops.hpp"
#include "dgres/groebner.hpp"
#include "dgres/truncated.hpp"

using namespace dgres;

namespace {

// k[x, xi] with deg x = -n, deg xi = -2n-1, d(xi) = x^2 (n even);
// for odd n just k[x] with deg x = -n.
ResolvingAlgebra lambda_alg(int n) {
  ResolvingAlgebra A;
  GenId x = A.add_gen("x", -n);
  if (n % 2 == 0) {
    GenId xi = A.add_gen("xi", -2 * n - 1);
    A.set_d(xi, A.generator(x) * A.generator(x));
  }
  return A;
}

}  // namespace

TEST_CASE("algebra validation") {
  SECTION("a healthy algebra") {
    ResolvingAlgebra A = lambda_alg(2);
    REQUIRE(A.validate());
    Poly x = A.generator(0), xi = A.generator(1);
    REQUIRE(A.d(x * xi) == x * x * x);  // d(x)=0, so Leibniz passes through x
    REQUIRE(A.d(A.d(x * xi)).is_zero());
  }
  SECTION("positive degree is rejected at construction") {
    ResolvingAlgebra A;
    REQUIRE_THROWS_AS(A.add_gen("t", 1), std::invalid_argument);
    A.add_gen("x", 0);
    REQUIRE_THROWS_AS(A.add_gen("x", 0), std::invalid_argument);  // duplicate
  }
  SECTION("wrong differential degree is reported") {
    ResolvingAlgebra A;
    GenId x = A.add_gen("x", 0);
    GenId xi = A.add_gen("xi", -2);
    A.set_d(xi, A.generator(x));  // degree 0, expected -1
    auto rep = A.validate();
    REQUIRE_FALSE(rep.ok);
  }
  SECTION("d squared failures are reported") {
    ResolvingAlgebra A;
    GenId x = A.add_gen("x", 0);
    GenId xi = A.add_gen("xi", -1);
    GenId eta = A.add_gen("eta", -2);
    A.set_d(xi, A.generator(x));
    A.set_d(eta, A.generator(xi));
    auto rep = A.validate();
    REQUIRE_FALSE(rep.ok);
    bool mentions = false;
    for (auto& v : rep.violations)
      if (v.find("d^2") != std::string::npos) mentions = true;
    REQUIRE(mentions);
  }
  SECTION("weight homogeneity is checked when all weights are set") {
    ResolvingAlgebra A;
    GenId x = A.add_gen("x", 0, 1);
    GenId e = A.add_gen("e", -1, 2);
    A.set_d(e, A.generator(x));  // weight 1, expected 2
    REQUIRE_FALSE(A.validate().ok);
    ResolvingAlgebra B;
    GenId bx = B.add_gen("x", 0, 1);
    GenId be = B.add_gen("e", -1, 2);
    B.set_d(be, B.generator(bx) * B.generator(bx));
    REQUIRE(B.validate());
  }
}

TEST_CASE("morphisms compose and validate") {
  ResolvingAlgebra A = lambda_alg(2);
  DGAMorphism id = identity_morphism(A);
  REQUIRE(id.validate());
  DGAMorphism twice = compose(id, id);
  REQUIRE(twice.validate());
  REQUIRE(twice.apply(A.generator(0)) == A.generator(0));

  SECTION("chain condition catches bad images") {
    // x -> x is fine; xi -> 2 xi breaks d(xi) = x^2.
    DGAMorphism bad{A, A, {A.generator(0), Poly(2) * A.generator(1)}};
    REQUIRE_FALSE(bad.validate().ok);
    // scaling x by c and xi by c^2 is a morphism
    DGAMorphism good{A, A, {Poly(3) * A.generator(0), Poly(9) * A.generator(1)}};
    REQUIRE(good.validate());
  }
}

TEST_CASE("augmentations") {
  ResolvingAlgebra A = lambda_alg(2);
  SECTION("origin is always valid") {
    auto eps = origin_point(A);
    REQUIRE(eps.validate());
    REQUIRE(eps.ev(A.generator(0) * A.generator(0) + Poly(3)) == Rat(3));
  }
  SECTION("points must kill the equations") {
    ResolvingAlgebra B;
    GenId x = B.add_gen("x", 0);
    GenId xi = B.add_gen("xi", -1);
    B.set_d(xi, B.generator(x) * B.generator(x));
    Augmentation good{B, {Rat(0), Rat(0)}};
    REQUIRE(good.validate());
    Augmentation bad{B, {Rat(1), Rat(0)}};
    REQUIRE_FALSE(bad.validate().ok);  // x^2 = 1 != 0 at this point
  }
}

TEST_CASE("tensor products") {
  ResolvingAlgebra A = lambda_alg(2);
  auto T = tensor(A, A);
  REQUIRE(T.prod.ngens() == 4);
  REQUIRE(T.prod.validate());
  REQUIRE(T.incl_left.validate());
  REQUIRE(T.incl_right.validate());
  // names: x, xi from the left; x', xi' from the right
  REQUIRE(T.prod.gen(2).name == "x'");
  REQUIRE(T.prod.gen(3).name == "xi'");
  // differentials act factorwise
  REQUIRE(T.prod.d(T.prod.generator(3)) == T.prod.generator(2) * T.prod.generator(2));
}

TEST_CASE("degree truncation of the generating set") {
  ResolvingAlgebra A = lambda_alg(2);  // degrees -2 and -5
  auto tr = truncation(A, 3);
  REQUIRE(tr.sub.ngens() == 1);
  REQUIRE(tr.sub.gen(0).name == "x");
  REQUIRE_FALSE(tr.complete);
  REQUIRE(tr.incl.validate());
  auto all = truncation(A, 5);
  REQUIRE(all.complete);
  REQUIRE(all.sub == A);
}

TEST_CASE("standard etale extensions and localization") {
  ResolvingAlgebra A;
  A.add_gen("x", 0);
  auto loc = localize(A, A.generator(0));
  REQUIRE(loc.B.ngens() == 3);  // x, y, eta
  REQUIRE(loc.B.gen(1).name == "y");
  REQUIRE(loc.B.gen(2).name == "eta");
  REQUIRE(loc.B.validate());
  REQUIRE(loc.incl.validate());
  // d(eta) = x*y - 1
  REQUIRE(loc.B.d_gen(2) == loc.B.generator(0) * loc.B.generator(1) - Poly(1));

  SECTION("h0 of the localization inverts x") {
    auto pres = gb::h0_presentation(loc.B);
    REQUIRE(pres.vm.size() == 2);
    REQUIRE(pres.relations.size() == 1);
    auto x = gb::to_cpoly(loc.B.generator(0), pres.vm);
    auto uc = gb::unit_mod(2, pres.relations, x);
    REQUIRE(uc.unit);
    // inverse is y
    auto y = gb::to_cpoly(loc.B.generator(1), pres.vm);
    REQUIRE(uc.inverse == y);
  }
  SECTION("non-cycles cannot be localized") {
    ResolvingAlgebra C;
    GenId x = C.add_gen("x", 0);
    GenId xi = C.add_gen("xi", -1);
    C.set_d(xi, C.generator(x));
    // localize at a degree -1 element: rejected
    REQUIRE_THROWS_AS(localize(C, C.generator(xi)), std::invalid_argument);
  }
}

TEST_CASE("koszul complexes") {
  auto K = koszul(2, 1, [](const ResolvingAlgebra& K0) {
    return std::vector<Poly>{K0.generator(0)};  // s = x1
  });
  REQUIRE(K.ngens() == 3);
  REQUIRE(K.validate());
  REQUIRE(K.has_weights());
  REQUIRE(K.gen(2).weight == 1);

  auto K2 = koszul(2, 2, [](const ResolvingAlgebra& K0) {
    Poly x1 = K0.generator(0), x2 = K0.generator(1);
    return std::vector<Poly>{x1 * x1, x1 * x2};
  });
  REQUIRE(K2.validate());
  REQUIRE(K2.gen(2).weight == 2);
  REQUIRE(K2.gen(3).weight == 2);
}

TEST_CASE("order truncation at a point") {
  ResolvingAlgebra A = lambda_alg(2);
  auto eps = origin_point(A);

  SECTION("basis below order 3") {
    TruncatedDGA T = madic_truncate(A, eps, 3);
    // 1, x, xi, x^2, x*xi
    REQUIRE(T.basis().size() == 5);
    std::vector<Monomial> want = {
        Monomial::one(), Monomial::gen(0), Monomial::gen(1), Monomial::gen(0, 2),
        Monomial::of({{0, 1}, {1, 1}})};
    std::sort(want.begin(), want.end());
    REQUIRE(T.basis() == want);
  }
  SECTION("differential respects the order filtration") {
    TruncatedDGA T2 = madic_truncate(A, eps, 2);
    REQUIRE(T2.d_of(Monomial::gen(1)).is_zero());  // x^2 dies at order 2
    TruncatedDGA T3 = madic_truncate(A, eps, 3);
    REQUIRE(T3.d_of(Monomial::gen(1)) ==
            T3.algebra().generator(0) * T3.algebra().generator(0));
  }
  SECTION("cohomology of the truncated complex") {
    TruncatedDGA T = madic_truncate(A, eps, 3);
    auto C = T.complex(T.lowest_degree(), 0);
    REQUIRE(C.validate());
    REQUIRE(cohomology(C, 0).dim == 1);    // constants
    REQUIRE(cohomology(C, -2).dim == 1);   // x survives at this order
    REQUIRE(cohomology(C, -5).dim == 0);   // xi maps onto x^2
    REQUIRE(cohomology(C, -4).dim == 0);
  }
  SECTION("re-centering keeps the differential in the maximal ideal") {
    ResolvingAlgebra B;
    B.add_gen("x", 0);
    auto loc = localize(B, B.generator(0));
    Augmentation pt{loc.B, {Rat(1), Rat(1), Rat(0)}};  // x=1, y=1
    REQUIRE(pt.validate());
    TruncatedDGA T = madic_truncate(loc.B, pt, 4);
    // d'(eta) = (x+1)(y+1) - 1 = xy + x + y: no constant term
    Poly deta = T.algebra().d_gen(2);
    for (auto& [m, c] : deta.terms()) REQUIRE(m.total_exponent() >= 1);
  }
  SECTION("invalid points are rejected") {
    ResolvingAlgebra B;
    GenId x = B.add_gen("x", 0);
    GenId xi = B.add_gen("xi", -1);
    B.set_d(xi, B.generator(x) * B.generator(x));
    Augmentation bad{B, {Rat(1), Rat(0)}};
    REQUIRE_THROWS_AS(madic_truncate(B, bad, 2), std::invalid_argument);
  }
}

TEST_CASE("transported morphisms between truncations") {
  SECTION("identity transports to the identity") {
    ResolvingAlgebra A = lambda_alg(2);
    auto eps = origin_point(A);
    TruncatedDGA T = madic_truncate(A, eps, 3);
    auto tm = transport(identity_morphism(A), eps, eps, T, T);
    for (int deg : {0, -2, -4, -5, -7}) {
      QMat m = tm.matrix_at(deg);
      REQUIRE(m.rows() == m.cols());
      for (std::size_t i = 0; i < m.rows(); ++i) REQUIRE(m.get(i, i) == 1);
      REQUIRE(rank(m) == m.rows());
    }
  }
  SECTION("x -> x^2 fails to be an isomorphism at order 2") {
    ResolvingAlgebra A;
    A.add_gen("x", 0);
    DGAMorphism sq{A, A, {A.generator(0) * A.generator(0)}};
    REQUIRE(sq.validate());
    auto eps = origin_point(A);
    TruncatedDGA T1 = madic_truncate(A, eps, 1);
    auto tm1 = transport(sq, eps, eps, T1, T1);
    REQUIRE(rank(tm1.matrix_at(0)) == 1);  // only the constants at level 1

    TruncatedDGA T2 = madic_truncate(A, eps, 2);
    auto tm2 = transport(sq, eps, eps, T2, T2);
    QMat m = tm2.matrix_at(0);
    REQUIRE(m.rows() == 2);
    REQUIRE(rank(m) == 1);  // x is no longer hit
  }
  SECTION("incompatible points are rejected") {
    ResolvingAlgebra A;
    A.add_gen("x", 0);
    DGAMorphism shift{A, A, {A.generator(0) + Poly(1)}};  // x -> x + 1
    auto eps = origin_point(A);
    TruncatedDGA T = madic_truncate(A, eps, 2);
    REQUIRE_THROWS_AS(transport(shift, eps, eps, T, T), std::invalid_argument);
  }
}

TEST_CASE("filtration layers match the free graded-symmetric count") {
  // The number of order-truncation basis monomials with total exponent k must
  // equal the dimension of the k-th symmetric layer on the generator set:
  // unbounded powers of even generators, square-zero odd generators.
  auto layer_counts = [](const ResolvingAlgebra& A, std::uint32_t kmax) {
    std::vector<std::size_t> ways(kmax + 1, 0);
    ways[0] = 1;
    for (GenId g = 0; g < A.ngens(); ++g) {
      std::vector<std::size_t> next(kmax + 1, 0);
      for (std::uint32_t k = 0; k <= kmax; ++k) {
        if (ways[k] == 0) continue;
        if (A.scope()->odd(g)) {
          next[k] += ways[k];
          if (k + 1 <= kmax) next[k + 1] += ways[k];
        } else {
          for (std::uint32_t e = 0; k + e <= kmax; ++e) next[k + e] += ways[k];
        }
      }
      ways = std::move(next);
    }
    return ways;
  };

  std::vector<ResolvingAlgebra> fixtures;
  fixtures.push_back(lambda_alg(2));
  fixtures.push_back(lambda_alg(4));
  {
    ResolvingAlgebra M;
    M.add_gen("x", 0);
    M.add_gen("y", 0);
    GenId xi = M.add_gen("xi", -1);
    M.add_gen("th", -3);
    M.set_d(xi, M.generator(0) * M.generator(1));
    fixtures.push_back(std::move(M));
  }
  for (auto& A : fixtures) {
    REQUIRE(A.validate());
    auto eps = origin_point(A);
    TruncatedDGA T = madic_truncate(A, eps, 5);
    auto want = layer_counts(A, 4);
    std::vector<std::size_t> got(5, 0);
    for (auto& m : T.basis()) ++got[m.total_exponent()];
    for (std::uint32_t k = 0; k <= 4; ++k) REQUIRE(got[k] == want[k]);
  }
}
