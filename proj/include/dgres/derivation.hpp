#pragma once

#include <cstdint>

#include "dgres/poly.hpp"
#include "dgres/scope.hpp"

namespace dgres {

// Expansion of a degree-`deg_op` graded derivation D over one canonical word:
//
//   D(g1^{e1} ... gk^{ek}) = sum_j  c_j * (word with one g_j struck) * D(g_j)
//
// with the coefficient kept on the LEFT of D(g_j). Moving D in from the left
// costs (-1)^{deg_op * deg(prefix_j)}; moving the value D(g_j) (of degree
// deg g_j + deg_op) back out to the right of the remaining tail costs
// (-1)^{(deg g_j + deg_op) * deg(tail_j)}. Repeated even generators
// contribute their exponent; odd generators never repeat.
//
// sink(coeff : Rat, struck : Monomial, g : GenId) receives each term.
template <class Sink>
void leibniz_terms(const Scope& sc, const Monomial& m, int deg_op, Sink&& sink) {
  int total = m.degree(sc);
  int prefix = 0;
  for (auto& [g, e] : m.entries()) {
    int dg = sc.degree(g);
    int tail = (total - dg) - prefix;  // degree of the struck word minus prefix
    long s = static_cast<long>(deg_op) * prefix + static_cast<long>(dg + deg_op) * tail;
    Rat c(static_cast<long>(e) * (s % 2 == 0 ? 1 : -1));
    sink(c, m.erase_one(g), g);
    prefix += dg * static_cast<int>(e);
  }
}

// Applies a derivation with generator values `value(g)` (null meaning zero),
// coefficients living in the same algebra.
template <class ValueFn>
Poly apply_derivation(const Poly& p, int deg_op, ValueFn&& value, const ScopePtr& out) {
  Poly r;
  if (!p.scope()) return r;
  const Scope& sc = *p.scope();
  for (auto& [m, c0] : p.terms()) {
    const Rat& c = c0;
    leibniz_terms(sc, m, deg_op, [&](const Rat& k, const Monomial& struck, GenId g) {
      const Poly* v = value(g);
      if (v == nullptr || v->is_zero()) return;
      r += Poly::term(out, c * k, struck) * *v;
    });
  }
  return r.rescope(out);
}

// Same, but the struck coefficient word is first pushed through a ring map
// (used for derivations B -> A whose module structure runs through P).
template <class ValueFn, class PushFn>
Poly apply_derivation_pushed(const Poly& p, int deg_op, ValueFn&& value, PushFn&& push,
                             const ScopePtr& out) {
  Poly r;
  if (!p.scope()) return r;
  const Scope& sc = *p.scope();
  for (auto& [m, c0] : p.terms()) {
    const Rat& c = c0;
    leibniz_terms(sc, m, deg_op, [&](const Rat& k, const Monomial& struck, GenId g) {
      const Poly* v = value(g);
      if (v == nullptr || v->is_zero()) return;
      Poly coeff = push(struck);
      if (coeff.is_zero()) return;
      r += (c * k) * (coeff * *v);
    });
  }
  return r.rescope(out);
}

}  // namespace dgres
