#pragma once

// Decision procedures over the algebraic kernel: point-wise etale tests via
// cotangent fibers, finite-level completion comparison, quasi-isomorphism
// verdicts in several sound (mode-scoped) senses, perfectness diagnostics,
// and the Jacobian unit test for standard etale data.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgres/algebra_ops.hpp"
#include "dgres/cohomology.hpp"
#include "dgres/groebner.hpp"
#include "dgres/module.hpp"
#include "dgres/truncated.hpp"

namespace dgres {

// Resource caps can leave a question undecided; verdicts say so explicitly.
enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

// ---------------------------------------------------------------------------
// Etale at a rational point: the fiber of the cotangent cone is acyclic.

struct EtaleReport {
  bool etale = true;
  std::vector<int> witness;            // degrees with nonzero fiber cohomology
  std::map<int, std::size_t> fiber_h;  // every computed dimension
};

inline EtaleReport is_etale_at(const DGAMorphism& f, const Augmentation& eps) {
  if (eps.alg.scope() != f.dst.scope())
    throw std::invalid_argument("is_etale_at: the point must live on the target algebra");
  CotangentComplex ct = cotangent_complex(f);
  FiberComplex fib = fiber_at(ct.cone_mod, eps);
  EtaleReport out;
  if (ct.cone_mod.rank() == 0) return out;
  for (int n = fib.C.lo; n <= fib.C.hi(); ++n) {
    std::size_t h = cohomology(fib.C, n).dim;
    out.fiber_h[n] = h;
    if (h != 0) {
      out.etale = false;
      out.witness.push_back(n);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Completion comparison: truncate both sides at the point to each level
// 1..max_level and require the transported map to induce isomorphisms on
// cohomology in every degree of the (complete) truncated window.

struct LevelReport {
  int level = 0;
  bool pass = true;
  std::vector<int> mismatch;  // degrees where dims differ or the map drops rank
};

struct CompletionReport {
  std::vector<LevelReport> levels;
  bool all_pass = true;
  int verified_to = 0;  // longest all-pass prefix of levels
};

inline CompletionReport completion_compare(const DGAMorphism& f, const Augmentation& eps,
                                           int max_level) {
  if (eps.alg.scope() != f.dst.scope())
    throw std::invalid_argument("completion_compare: the point must live on the target algebra");
  Augmentation epsA = pullback_point(f, eps);
  CompletionReport out;
  for (int n = 1; n <= max_level; ++n) {
    TruncatedDGA TA = madic_truncate(f.src, epsA, n);
    TruncatedDGA TB = madic_truncate(f.dst, eps, n);
    TruncMap tm = transport(f, epsA, eps, TA, TB);
    int lo = std::min(TA.lowest_degree(), TB.lowest_degree());
    FiniteComplex CA = TA.complex(lo, 0);
    FiniteComplex CB = TB.complex(lo, 0);
    LevelReport lr{n, true, {}};
    for (int d = lo; d <= 0; ++d) {
      CohomologyAt ha = cohomology(CA, d);
      CohomologyAt hb = cohomology(CB, d);
      bool ok = ha.dim == hb.dim;
      if (ok && ha.dim != 0) {
        QMat ind = induced_on_cohomology(CA, CB, d, tm.matrix_at(d), ha, hb);
        ok = rank(ind) == ha.dim;
      }
      if (!ok) {
        lr.pass = false;
        lr.mismatch.push_back(d);
      }
    }
    if (!lr.pass) out.all_pass = false;
    out.levels.push_back(std::move(lr));
  }
  for (auto& lr : out.levels) {
    if (!lr.pass) break;
    out.verified_to = lr.level;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite (degree, weight) slices of a free module, mirroring algebra_slice:
// basis elements are (slot, coefficient monomial) pairs.

struct ModuleSlice {
  int lo = 0;
  std::vector<std::vector<std::pair<std::size_t, Monomial>>> bases;  // per degree
  FiniteComplex C;
};

inline ModuleSlice module_slice(const FreeDGModule& M, int lo, int hi,
                                std::optional<int> weight = std::nullopt) {
  ModuleSlice out;
  out.lo = lo;
  out.C.lo = lo;
  const ResolvingAlgebra& A = M.algebra();
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::pair<std::size_t, Monomial>> b;
    for (std::size_t i = 0; i < M.rank(); ++i) {
      std::optional<int> w;
      if (weight) w = *weight - M.basis(i).weight;
      for (auto& m :
           enumerate_monomials(A, MonoSpec{n - M.basis(i).degree, w, std::nullopt}))
        b.emplace_back(i, m);
    }
    out.bases.push_back(std::move(b));
    out.C.dims.push_back(out.bases.back().size());
  }
  for (int n = lo; n < hi; ++n) {
    const auto& src = out.bases[static_cast<std::size_t>(n - lo)];
    const auto& dst = out.bases[static_cast<std::size_t>(n - lo + 1)];
    std::map<std::pair<std::size_t, Monomial>, std::size_t> pos;
    for (std::size_t k = 0; k < dst.size(); ++k) pos[dst[k]] = k;
    QMat mat(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      auto e = M.zero();
      e[src[j].first] = Poly::term(A.scope(), Rat(1), src[j].second);
      auto v = M.d(e);
      for (std::size_t slot = 0; slot < v.size(); ++slot)
        for (auto& [m, c] : v[slot].terms()) {
          auto it = pos.find({slot, m});
          if (it == pos.end())
            throw std::logic_error("module_slice: differential left the slice basis");
          mat.add(it->second, j, c);
        }
    }
    out.C.maps.push_back(std::move(mat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quasi-isomorphism verdicts. Every mode first compares degree-0 cohomology
// rings by elimination; the cotangent side is then checked point-wise or
// weight-slice-wise. Verdicts are scoped to their mode: a pass certifies
// exactly the checks the mode names, nothing global.

struct QisMode {
  enum Kind { AtPoints, WeightExact, H0Only };
  Kind kind = H0Only;
  std::vector<Augmentation> points;  // AtPoints
  int level = 4;                     // completion levels verified per point
  int max_weight = 8;                // slices checked in weight-exact mode

  static QisMode at_points(std::vector<Augmentation> pts, int level = 4) {
    QisMode m;
    m.kind = AtPoints;
    m.points = std::move(pts);
    m.level = level;
    return m;
  }
  static QisMode weight_exact(int max_weight = 8) {
    QisMode m;
    m.kind = WeightExact;
    m.max_weight = max_weight;
    return m;
  }
  static QisMode h0_only() { return {}; }

  std::string describe() const {
    switch (kind) {
      case AtPoints:
        return "at_points(" + std::to_string(points.size()) + " points, level " +
               std::to_string(level) + ")";
      case WeightExact:
        return "weight_exact(weights <= " + std::to_string(max_weight) + ")";
      default:
        return "h0_only";
    }
  }
};

struct QisReport {
  std::string mode;
  Verdict verdict = Verdict::Pass;
  bool h0_surjective = true;
  bool h0_injective = true;
  std::vector<std::string> notes;
  bool pass() const { return verdict == Verdict::Pass; }
};

inline QisReport is_qis(const DGAMorphism& f, const QisMode& mode, gb::Caps caps = {}) {
  QisReport out;
  out.mode = mode.describe();

  try {
    gb::H0Compare h0 = gb::h0_compare(f, caps);
    out.h0_surjective = h0.surjective;
    out.h0_injective = h0.injective;
    if (!h0.iso()) {
      out.verdict = Verdict::Fail;
      for (auto& n : h0.notes) out.notes.push_back(n);
    }
  } catch (const gb::ResourceError& e) {
    out.verdict = Verdict::Inconclusive;
    out.notes.push_back(std::string("h0 comparison hit a resource cap: ") + e.what());
    return out;
  }

  if (mode.kind == QisMode::H0Only) return out;

  if (mode.kind == QisMode::AtPoints) {
    for (std::size_t i = 0; i < mode.points.size(); ++i) {
      EtaleReport er = is_etale_at(f, mode.points[i]);
      if (!er.etale) {
        out.verdict = Verdict::Fail;
        std::string degs;
        for (int d : er.witness) degs += (degs.empty() ? "" : ", ") + std::to_string(d);
        out.notes.push_back("cotangent fiber at point " + std::to_string(i) +
                            " has cohomology in degrees {" + degs + "}");
      }
      CompletionReport cr = completion_compare(f, mode.points[i], mode.level);
      if (!cr.all_pass) {
        out.verdict = Verdict::Fail;
        for (auto& lr : cr.levels)
          if (!lr.pass)
            out.notes.push_back("completion comparison at point " + std::to_string(i) +
                                " fails at level " + std::to_string(lr.level));
      }
    }
    return out;
  }

  // Weight-exact: every (degree, weight) slice of the cotangent cone must be
  // exact. Positive weights everywhere keep each slice finite-dimensional.
  auto check_weights = [](const ResolvingAlgebra& R, const char* side) {
    for (GenId g = 0; g < R.ngens(); ++g)
      if (R.gen(g).weight <= 0)
        throw std::invalid_argument(
            std::string("is_qis: weight-exact mode needs positive weights on every ") + side +
            " generator");
  };
  check_weights(f.src, "source");
  check_weights(f.dst, "target");
  CotangentComplex ct = cotangent_complex(f);
  const FreeDGModule& L = ct.cone_mod;
  if (L.rank() == 0) return out;
  int D = 0;
  for (GenId g = 0; g < f.dst.ngens(); ++g) D = std::max(D, -f.dst.gen(g).degree);
  for (int w = 1; w <= mode.max_weight; ++w) {
    int lo = 0, hi = 0;
    bool any = false;
    for (std::size_t i = 0; i < L.rank(); ++i) {
      if (L.basis(i).weight > w) continue;
      int slack = w - L.basis(i).weight;
      lo = std::min(lo, L.basis(i).degree - D * slack);
      hi = std::max(hi, L.basis(i).degree);
      any = true;
    }
    if (!any) continue;
    ModuleSlice S = module_slice(L, lo, hi, w);
    for (int n = lo; n <= hi; ++n) {
      std::size_t h = cohomology(S.C, n).dim;
      if (h != 0) {
        out.verdict = Verdict::Fail;
        out.notes.push_back("cotangent slice at weight " + std::to_string(w) +
                            " has cohomology in degree " + std::to_string(n) + " (dim " +
                            std::to_string(h) + ")");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point-wise perfectness diagnostic: dimensions of the Kaehler fiber
// cohomology and the minimal degree window containing the nonzero ones.
// Necessary evidence only, never a global certificate.

struct PerfectnessReport {
  std::map<int, std::size_t> dims;            // nonzero dimensions only
  std::optional<std::pair<int, int>> window;  // [min, max] of the keys above
};

inline PerfectnessReport perfectness_report(const ResolvingAlgebra& A, const Augmentation& eps) {
  if (eps.alg.scope() != A.scope())
    throw std::invalid_argument("perfectness_report: the point must live on the algebra");
  Kaehler K = kaehler(A);
  PerfectnessReport out;
  if (K.omega.rank() == 0) return out;
  FiberComplex fib = fiber_at(K.omega, eps);
  for (int n = fib.C.lo; n <= fib.C.hi(); ++n) {
    std::size_t h = cohomology(fib.C, n).dim;
    if (h != 0) out.dims[n] = h;
  }
  if (!out.dims.empty()) out.window = {{out.dims.begin()->first, out.dims.rbegin()->first}};
  return out;
}

// ---------------------------------------------------------------------------
// Jacobian test for standard etale data: det(df_i/dx_j) must be a unit in the
// degree-0 cohomology of the extended algebra.

inline Poly poly_det(std::vector<std::vector<Poly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Poly(1);
  if (n == 1) return m[0][0];
  Poly out;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Poly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    Poly term = m[0][j] * poly_det(std::move(minor));
    out += (j % 2 == 0) ? term : -term;
  }
  return out;
}

inline gb::UnitCheck jacobian_unit_check(const StandardEtaleResult& se, gb::Caps caps = {}) {
  if (se.xs.empty()) return {true, {}};
  std::vector<std::vector<Poly>> m(se.f.size());
  for (std::size_t i = 0; i < se.f.size(); ++i)
    for (std::size_t j = 0; j < se.xs.size(); ++j) m[i].push_back(se.f[i].graded_partial(se.xs[j]));
  Poly det = poly_det(std::move(m));
  gb::H0Presentation pres = gb::h0_presentation(se.B);
  return gb::unit_mod(pres.vm.size(), pres.relations, gb::to_cpoly(det, pres.vm), caps);
}

}  // namespace dgres
