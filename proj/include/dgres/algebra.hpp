#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgres/derivation.hpp"
#include "dgres/poly.hpp"
#include "dgres/scope.hpp"

namespace dgres {

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string msg) {
    ok = false;
    violations.push_back(std::move(msg));
  }
  void merge(const ValidationReport& r) {
    ok = ok && r.ok;
    violations.insert(violations.end(), r.violations.begin(), r.violations.end());
  }
  explicit operator bool() const { return ok; }
};

// A quasi-free differential graded-commutative algebra over Q: free on finitely
// many generators of degree <= 0, with a degree +1 differential given on
// generators and extended by the graded Leibniz rule. `base_count` marks a
// prefix of the generators as the base subalgebra (used by relative
// constructions); the base is itself closed under d.
class ResolvingAlgebra {
 public:
  ResolvingAlgebra() = default;

  static ResolvingAlgebra ground() { return {}; }

  // Builder interface. Generators append; ids are stable.
  GenId add_gen(std::string name, int degree, int weight = 0) {
    if (degree > 0) throw std::invalid_argument("generator of positive degree: " + name);
    if (sc_ && sc_->find(name)) throw std::invalid_argument("duplicate generator name: " + name);
    std::vector<GenInfo> extra{GenInfo{std::move(name), degree, weight}};
    sc_ = sc_ ? Scope::extend(sc_, std::move(extra)) : Scope::make(std::move(extra));
    d_.emplace_back();  // zero
    return static_cast<GenId>(d_.size() - 1);
  }

  void set_d(GenId g, Poly value) {
    d_.at(g) = value.rescope(sc_);
  }

  void mark_base(std::size_t prefix_gens) {
    if (prefix_gens > ngens()) throw std::out_of_range("base prefix too large");
    base_ = prefix_gens;
  }

  const ScopePtr& scope() const { return sc_; }
  std::size_t ngens() const { return d_.size(); }
  std::size_t base_count() const { return base_; }
  const GenInfo& gen(GenId g) const { return (*sc_)[g]; }
  const Poly& d_gen(GenId g) const { return d_.at(g); }
  Poly generator(GenId g) const { return Poly::generator(sc_, g); }

  std::optional<GenId> find(std::string_view name) const {
    return sc_ ? sc_->find(name) : std::nullopt;
  }

  bool has_weights() const {
    if (!sc_) return false;
    for (std::size_t i = 0; i < ngens(); ++i)
      if ((*sc_)[i].weight <= 0) return false;
    return ngens() > 0;
  }

  int weight_of(const Monomial& m) const {
    int w = 0;
    for (auto& [g, e] : m.entries()) w += (*sc_)[g].weight * static_cast<int>(e);
    return w;
  }

  // The differential, extended to arbitrary elements by the Leibniz rule.
  Poly d(const Poly& p) const {
    return apply_derivation(
        p.rescope(sc_), +1, [&](GenId g) { return &d_.at(g); }, sc_);
  }

  ValidationReport validate() const {
    ValidationReport rep;
    for (GenId g = 0; g < ngens(); ++g) {
      const GenInfo& info = gen(g);
      if (info.degree > 0) rep.fail("generator " + info.name + " has positive degree");
      const Poly& dv = d_[g];
      if (dv.is_zero()) continue;
      if (!dv.is_homogeneous()) {
        rep.fail("d(" + info.name + ") is not homogeneous");
        continue;
      }
      if (auto deg = dv.hom_degree(); deg && *deg != info.degree + 1)
        rep.fail("d(" + info.name + ") has degree " + std::to_string(*deg) +
                 ", expected " + std::to_string(info.degree + 1));
      if (g < base_) {
        for (auto& [m, c] : dv.terms())
          for (auto& [h, e] : m.entries())
            if (h >= base_) rep.fail("base differential of " + info.name + " leaves the base");
      }
    }
    for (GenId g = 0; g < ngens(); ++g) {
      if (!d(d_[g]).is_zero()) rep.fail("d^2 != 0 on generator " + gen(g).name);
    }
    if (has_weights()) {
      for (GenId g = 0; g < ngens(); ++g) {
        int w = gen(g).weight;
        for (auto& [m, c] : d_[g].terms())
          if (weight_of(m) != w)
            rep.fail("d(" + gen(g).name + ") is not weight-homogeneous of weight " +
                     std::to_string(w));
      }
    }
    return rep;
  }

  bool operator==(const ResolvingAlgebra& o) const {
    if (ngens() != o.ngens() || base_ != o.base_) return false;
    for (GenId g = 0; g < ngens(); ++g)
      if (gen(g) != o.gen(g) || d_[g] != o.d_[g]) return false;
    return true;
  }

  // Degree-0 generators (the variables of h^0 presentations).
  std::vector<GenId> degree0_gens() const {
    std::vector<GenId> out;
    for (GenId g = 0; g < ngens(); ++g)
      if (gen(g).degree == 0) out.push_back(g);
    return out;
  }

  int min_gen_degree() const {
    int m = 0;
    for (GenId g = 0; g < ngens(); ++g) m = std::min(m, gen(g).degree);
    return m;
  }

 private:
  ScopePtr sc_;
  std::vector<Poly> d_;
  std::size_t base_ = 0;
};

// Morphism of resolving algebras: generator images in the target, required to
// preserve degree and commute with d. Stored by value; algebras are small.
struct DGAMorphism {
  ResolvingAlgebra src;
  ResolvingAlgebra dst;
  std::vector<Poly> val;  // per src generator

  Poly apply(const Poly& p) const { return p.substitute(dst.scope(), val); }

  ValidationReport validate() const {
    ValidationReport rep;
    if (val.size() != src.ngens()) {
      rep.fail("morphism value count does not match source generators");
      return rep;
    }
    for (GenId g = 0; g < src.ngens(); ++g) {
      const auto& info = src.gen(g);
      const Poly& v = val[g];
      if (!v.is_zero()) {
        if (!v.is_homogeneous()) {
          rep.fail("image of " + info.name + " is not homogeneous");
          continue;
        }
        if (auto deg = v.hom_degree(); deg && *deg != info.degree)
          rep.fail("image of " + info.name + " has degree " + std::to_string(*deg) +
                   ", expected " + std::to_string(info.degree));
      }
      if (apply(src.d_gen(g)) != dst.d(v))
        rep.fail("chain condition fails on generator " + info.name);
    }
    return rep;
  }
};

inline DGAMorphism identity_morphism(const ResolvingAlgebra& A) {
  DGAMorphism f{A, A, {}};
  for (GenId g = 0; g < A.ngens(); ++g) f.val.push_back(A.generator(g));
  return f;
}

// psi after phi.
inline DGAMorphism compose(const DGAMorphism& phi, const DGAMorphism& psi) {
  if (!(phi.dst == psi.src)) throw std::invalid_argument("compose: middle algebras differ");
  DGAMorphism r{phi.src, psi.dst, {}};
  for (auto& v : phi.val) r.val.push_back(psi.apply(v));
  return r;
}

// Rational point: values on degree-0 generators, zero on the rest, and the
// degree -1 differentials must vanish at the point.
struct Augmentation {
  ResolvingAlgebra alg;
  std::vector<Rat> val;  // per generator; must be 0 on negative degrees

  Rat ev(const Poly& p) const {
    return p.evaluate([&](GenId g) { return val.at(g); });
  }

  ValidationReport validate() const {
    ValidationReport rep;
    if (val.size() != alg.ngens()) {
      rep.fail("augmentation value count does not match generators");
      return rep;
    }
    for (GenId g = 0; g < alg.ngens(); ++g) {
      if (alg.gen(g).degree < 0 && val[g] != 0)
        rep.fail("augmentation nonzero on negative-degree generator " + alg.gen(g).name);
      if (alg.gen(g).degree == -1 && ev(alg.d_gen(g)) != 0)
        rep.fail("point does not satisfy d(" + alg.gen(g).name + ") = 0");
    }
    return rep;
  }
};

inline Augmentation origin_point(const ResolvingAlgebra& A) {
  return Augmentation{A, std::vector<Rat>(A.ngens(), Rat(0))};
}

// Pull a point on the target back along f: the composite evaluation. Images
// of negative-degree generators evaluate to 0 automatically.
inline Augmentation pullback_point(const DGAMorphism& f, const Augmentation& eps) {
  std::vector<Rat> v;
  v.reserve(f.src.ngens());
  for (GenId g = 0; g < f.src.ngens(); ++g) v.push_back(eps.ev(f.val[g]));
  return Augmentation{f.src, std::move(v)};
}

}  // namespace dgres
