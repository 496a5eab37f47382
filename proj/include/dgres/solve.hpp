#pragma once

// Bounded solver for d(g) = target: an exact linear system over the span of
// monomials of the right degree whose total exponent stays under a cap, with
// free coordinates pinned to zero so witnesses are reproducible.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/cohomology.hpp"
#include "dgres/linalg.hpp"

namespace dgres {

struct SolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::optional<Poly> bounded_d_solve(const ResolvingAlgebra& A, const Poly& target,
                                           std::uint32_t weight_cap) {
  if (target.is_zero()) return Poly();
  if (!target.is_homogeneous())
    throw std::invalid_argument("bounded_d_solve: target is not homogeneous");
  if (!A.d(target).is_zero()) throw std::invalid_argument("bounded_d_solve: target is not closed");
  const int deg = *target.hom_degree();
  std::vector<Monomial> cands = enumerate_monomials(A, MonoSpec{deg - 1, std::nullopt, weight_cap});
  if (cands.empty()) return std::nullopt;

  std::map<Monomial, std::size_t> rows;
  auto row_of = [&](const Monomial& m) {
    auto it = rows.find(m);
    if (it == rows.end()) it = rows.emplace(m, rows.size()).first;
    return it->second;
  };
  std::vector<std::map<std::size_t, Rat>> cols;
  cols.reserve(cands.size());
  for (auto& m : cands) {
    Poly dm = A.d(Poly::term(A.scope(), Rat(1), m));
    std::map<std::size_t, Rat> col;
    for (auto& [mm, c] : dm.terms()) col[row_of(mm)] = c;
    cols.push_back(std::move(col));
  }
  Poly t = target.rescope(A.scope());
  for (auto& [mm, c] : t.terms()) row_of(mm);

  QMat M(rows.size(), cands.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (auto& [i, c] : cols[j]) M.add(i, j, c);
  QVec b(rows.size(), Rat(0));
  for (auto& [mm, c] : t.terms()) b[rows[mm]] = c;

  auto sol = solve(M, b);
  if (!sol.solution) return std::nullopt;
  Poly g;
  for (std::size_t j = 0; j < cands.size(); ++j)
    if ((*sol.solution)[j] != 0) g += Poly::term(A.scope(), (*sol.solution)[j], cands[j]);
  return g;
}

// Escalation loop shared by the inductive constructions: cap, then twice the
// cap, then four times, before giving up with a scoped failure message.
struct EscalatedSolve {
  Poly value;
  std::uint32_t cap_used = 0;
};

inline EscalatedSolve bounded_d_solve_escalating(const ResolvingAlgebra& A, const Poly& target,
                                                 std::uint32_t cap, const std::string& what) {
  std::uint32_t c = cap;
  for (int round = 0; round < 3; ++round) {
    if (auto g = bounded_d_solve(A, target, c)) return {*g, c};
    if (round < 2) c *= 2;
  }
  throw SolveFailure(what + ": no solution up to cap " + std::to_string(c));
}

}  // namespace dgres
