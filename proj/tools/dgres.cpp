// Command-line front end. Loads workspace files, dispatches one command, and
// prints a JSON report (or an aligned table under --pretty) on standard
// output. Diagnostics go to standard error. Exit codes: 0 success, 1 negative
// verdict, 2 usage or input error, 3 resource limit / inconclusive.
#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dgres/algebra.hpp"
#include "dgres/algebra_ops.hpp"
#include "dgres/cohomology.hpp"
#include "dgres/constructions.hpp"
#include "dgres/criteria.hpp"
#include "dgres/der.hpp"
#include "dgres/dsl.hpp"
#include "dgres/groebner.hpp"
#include "dgres/homotopy.hpp"
#include "dgres/report.hpp"

namespace {

using namespace dgres;
using report::Json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Session {
  std::vector<std::string> files;
  bool pretty = false;
  dsl::Workspace ws;
  std::vector<std::string> diagnostics;

  void load() {
    for (auto& path : files) {
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open file '" + path + "'");
      std::ostringstream text;
      text << in.rdbuf();
      try {
        dsl::parse_into(ws, text.str());
      } catch (const dsl::ParseError& e) {
        throw UsageError(path + ": " + e.what());
      }
    }
  }

  const ResolvingAlgebra& algebra(const std::string& name) const {
    auto it = ws.algebras.find(name);
    if (it == ws.algebras.end()) throw UsageError("unknown algebra '" + name + "'");
    return it->second;
  }

  const dsl::NamedMorphism& morphism(const std::string& name) const {
    auto it = ws.morphisms.find(name);
    if (it == ws.morphisms.end()) throw UsageError("unknown morphism '" + name + "'");
    return it->second;
  }

  const dsl::NamedPoint& point_on(const std::string& name, const std::string& alg) const {
    auto it = ws.points.find(name);
    if (it == ws.points.end()) throw UsageError("unknown point '" + name + "'");
    if (it->second.on != alg)
      throw UsageError("point '" + name + "' lives on algebra '" + it->second.on +
                       "', expected '" + alg + "'");
    return it->second;
  }

  int emit(Json& j, int code) {
    report::finish(j, diagnostics);
    for (auto& d : diagnostics) std::cerr << d << "\n";
    if (pretty)
      std::cout << report::pretty(j);
    else
      std::cout << j.dump(2) << "\n";
    return code;
  }
};

std::pair<int, int> parse_window(const std::string& s) {
  auto dots = s.find("..");
  auto grab = [&](const std::string& part) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != part.size() || part.empty())
      throw UsageError("--degrees expects a..b with integers, got '" + s + "'");
    return v;
  };
  if (dots == std::string::npos) throw UsageError("--degrees expects a..b, got '" + s + "'");
  int a = grab(s.substr(0, dots));
  int b = grab(s.substr(dots + 2));
  if (a > b) throw UsageError("--degrees window '" + s + "' is empty");
  return {a, b};
}

// --- cohomology dimension helpers -------------------------------------------

std::map<int, std::size_t> dims_exact(const ResolvingAlgebra& A, int a, int b) {
  for (GenId g = 0; g < A.ngens(); ++g)
    if (A.gen(g).degree == 0)
      throw UsageError(
          "exact mode needs every generator in negative degree; "
          "use --mode weight or --mode truncate:N");
  std::map<int, std::size_t> dims;
  int top = std::min(b, 0);
  if (a > top) return dims;
  AlgebraSlice S = algebra_slice(A, a - 1, std::min(top + 1, 0));
  for (int d = a; d <= top; ++d) dims[d] = cohomology(S.C, d).dim;
  return dims;
}

std::map<int, std::size_t> dims_weight(const ResolvingAlgebra& A, int a, int b, int max_weight) {
  if (!A.has_weights())
    throw UsageError("weight mode needs a positive weight on every generator");
  std::map<int, std::size_t> dims;
  int top = std::min(b, 0);
  for (int w = 0; w <= max_weight; ++w) {
    AlgebraSlice S = algebra_slice(A, a - 1, std::min(top + 1, 0), w);
    for (int d = a; d <= top; ++d) dims[d] += cohomology(S.C, d).dim;
  }
  return dims;
}

std::map<int, std::size_t> dims_truncated(const ResolvingAlgebra& A, const Augmentation& eps,
                                          int N, int a, int b) {
  TruncatedDGA T = madic_truncate(A, eps, N);
  std::map<int, std::size_t> dims;
  int top = std::min(b, 0);
  if (a > top) return dims;
  FiniteComplex C = T.complex(a - 1, std::min(top + 1, 0));
  for (int d = a; d <= top; ++d) dims[d] = cohomology(C, d).dim;
  return dims;
}

// --- commands ----------------------------------------------------------------

int cmd_validate(Session& s) {
  Json j = report::make("validate", "exact");
  Json algs = Json::array(), morphs = Json::array(), pts = Json::array();
  bool ok = true;
  for (auto& [name, A] : s.ws.algebras) {
    algs.push_back(name);
    ValidationReport rep = A.validate();
    if (rep.ok) continue;
    ok = false;
    for (auto& v : rep.violations) s.diagnostics.push_back("algebra " + name + ": " + v);
    for (GenId g = 0; g < A.ngens(); ++g) {
      Poly r = A.d(A.d_gen(g));
      if (!r.is_zero())
        s.diagnostics.push_back("algebra " + name + ": d^2(" + A.gen(g).name + ") = " + r.str());
    }
  }
  for (auto& [name, m] : s.ws.morphisms) {
    morphs.push_back(name);
    ValidationReport rep = m.f.validate();
    if (rep.ok) continue;
    ok = false;
    for (auto& v : rep.violations) s.diagnostics.push_back("morphism " + name + ": " + v);
  }
  for (auto& [name, p] : s.ws.points) {
    pts.push_back(name);
    ValidationReport rep = p.point.validate();
    if (rep.ok) continue;
    ok = false;
    for (auto& v : rep.violations) s.diagnostics.push_back("point " + name + ": " + v);
  }
  j["inputs"]["algebras"] = algs;
  j["inputs"]["morphisms"] = morphs;
  j["inputs"]["points"] = pts;
  j["verdict"] = ok ? "pass" : "fail";
  return s.emit(j, ok ? kOk : kNegative);
}

struct CohomologyArgs {
  std::string alg, degrees, at;
  std::string mode = "exact";
  int max_weight = 8;
};

int cmd_cohomology(Session& s, const CohomologyArgs& a) {
  const ResolvingAlgebra& A = s.algebra(a.alg);
  auto [lo, hi] = parse_window(a.degrees);
  std::map<int, std::size_t> dims;
  if (a.mode == "exact") {
    dims = dims_exact(A, lo, hi);
  } else if (a.mode == "weight") {
    dims = dims_weight(A, lo, hi, a.max_weight);
  } else if (a.mode.rfind("truncate:", 0) == 0) {
    int N = 0;
    try {
      N = std::stoi(a.mode.substr(9));
    } catch (const std::exception&) {
      throw UsageError("bad truncation level in '" + a.mode + "'");
    }
    if (N < 1) throw UsageError("truncation level must be at least 1");
    if (a.at.empty()) throw UsageError("--mode truncate:N needs --at POINT");
    const auto& p = s.point_on(a.at, a.alg);
    dims = dims_truncated(A, p.point, N, lo, hi);
  } else {
    throw UsageError("unknown mode '" + a.mode + "' (expected exact, weight, or truncate:N)");
  }
  Json j = report::make("cohomology", a.mode);
  j["inputs"]["algebra"] = a.alg;
  j["inputs"]["degrees"] = a.degrees;
  if (!a.at.empty()) j["inputs"]["at"] = a.at;
  j["dimensions"] = report::degree_map(dims, lo, hi);
  return s.emit(j, kOk);
}

int cmd_h0(Session& s, const std::string& alg) {
  const ResolvingAlgebra& A = s.algebra(alg);
  gb::H0Presentation pres = gb::h0_presentation(A);
  Json j = report::make("h0", "groebner");
  j["inputs"]["algebra"] = alg;
  Json vars = Json::array();
  for (GenId g : pres.vm.vars) vars.push_back(A.gen(g).name);
  Json rels = Json::array();
  for (auto& r : pres.relations) rels.push_back(gb::from_cpoly(r, pres.vm).str());
  Json w = Json::object();
  w["variables"] = vars;
  w["relations"] = rels;
  j["witness"] = w;
  return s.emit(j, kOk);
}

int cmd_etale(Session& s, const std::string& morph, const std::string& at) {
  const auto& m = s.morphism(morph);
  const auto& p = s.point_on(at, m.dst);
  EtaleReport r = is_etale_at(m.f, p.point);
  for (auto& [d, k] : r.fiber_h)
    if (k != 0)
      s.diagnostics.push_back("cotangent fiber h^" + std::to_string(d) + " has dimension " +
                              std::to_string(k));
  Json j = report::make("etale-at", "fiber");
  j["inputs"]["morphism"] = morph;
  j["inputs"]["at"] = at;
  j["verdict"] = r.etale ? "pass" : "fail";
  return s.emit(j, r.etale ? kOk : kNegative);
}

struct QisArgs {
  std::string morph;
  std::string mode = "h0";
  std::vector<std::string> at;
  int level = 4;
  int max_weight = 8;
};

int cmd_qis(Session& s, const QisArgs& a) {
  const auto& m = s.morphism(a.morph);
  QisMode qm;
  if (a.mode == "points") {
    if (a.at.empty()) throw UsageError("--mode points needs at least one --at POINT");
    std::vector<Augmentation> pts;
    for (auto& name : a.at) pts.push_back(s.point_on(name, m.dst).point);
    qm = QisMode::at_points(std::move(pts), a.level);
  } else if (a.mode == "weight") {
    qm = QisMode::weight_exact(a.max_weight);
  } else if (a.mode == "h0") {
    qm = QisMode::h0_only();
  } else {
    throw UsageError("unknown mode '" + a.mode + "' (expected points, weight, or h0)");
  }
  QisReport r = is_qis(m.f, qm);
  for (auto& n : r.notes) s.diagnostics.push_back(n);
  Json j = report::make("qis", r.mode);
  j["inputs"]["morphism"] = a.morph;
  if (!a.at.empty()) j["inputs"]["at"] = a.at;
  j["verdict"] = to_string(r.verdict);
  int code = r.verdict == Verdict::Pass ? kOk
             : r.verdict == Verdict::Fail ? kNegative
                                          : kInconclusive;
  return s.emit(j, code);
}

int cmd_completion(Session& s, const std::string& morph, const std::string& at, int levels) {
  if (levels < 1) throw UsageError("--levels must be at least 1");
  const auto& m = s.morphism(morph);
  const auto& p = s.point_on(at, m.dst);
  CompletionReport r = completion_compare(m.f, p.point, levels);
  for (auto& lev : r.levels) {
    if (lev.pass) {
      s.diagnostics.push_back("level " + std::to_string(lev.level) + ": pass");
    } else {
      std::string where;
      for (int d : lev.mismatch) where += (where.empty() ? "" : ", ") + std::to_string(d);
      s.diagnostics.push_back("level " + std::to_string(lev.level) + ": mismatch at degrees " +
                              where);
    }
  }
  s.diagnostics.push_back("verified through level " + std::to_string(r.verified_to));
  Json j = report::make("completion-compare", "truncate:" + std::to_string(levels));
  j["inputs"]["morphism"] = morph;
  j["inputs"]["at"] = at;
  j["verdict"] = r.all_pass ? "pass" : "fail";
  return s.emit(j, r.all_pass ? kOk : kNegative);
}

int cmd_perfect(Session& s, const std::string& alg, const std::string& at) {
  const ResolvingAlgebra& A = s.algebra(alg);
  const auto& p = s.point_on(at, alg);
  PerfectnessReport r = perfectness_report(A, p.point);
  Json j = report::make("perfect-at", "fiber");
  j["inputs"]["algebra"] = alg;
  j["inputs"]["at"] = at;
  if (r.window) {
    s.diagnostics.push_back("nonzero fiber cohomology confined to [" +
                            std::to_string(r.window->first) + ", " +
                            std::to_string(r.window->second) + "]");
    j["dimensions"] = report::degree_map(r.dims, r.window->first, r.window->second);
  } else {
    s.diagnostics.push_back("fiber cohomology vanishes everywhere");
    j["dimensions"] = Json::object();
  }
  return s.emit(j, kOk);
}

int cmd_diagonal(Session& s, const std::string& alg, int cap) {
  if (cap < 1) throw UsageError("--cap must be at least 1");
  const ResolvingAlgebra& A = s.algebra(alg);
  DiagonalResolution D = diagonal_resolution(A, static_cast<std::uint32_t>(cap));
  Json j = report::make("diagonal-resolve", "cap:" + std::to_string(cap));
  j["inputs"]["algebra"] = alg;
  Json cells = Json::array();
  for (auto& wit : D.witnesses) {
    Json c = Json::object();
    c["cell"] = D.ext.gen(wit.cell).name;
    c["h"] = wit.h.str();
    c["g"] = wit.g.str();
    c["cap_used"] = wit.cap_used;
    cells.push_back(c);
  }
  Json w = Json::object();
  w["generators"] = D.ext.ngens();
  w["cells"] = cells;
  j["witness"] = w;
  return s.emit(j, kOk);
}

int cmd_resolve_morphism(Session& s, const std::string& morph, int cap) {
  if (cap < 1) throw UsageError("--cap must be at least 1");
  const auto& m = s.morphism(morph);
  DiagonalResolution D = diagonal_resolution(m.f.src, static_cast<std::uint32_t>(cap));
  MorphismResolution r = resolve_morphism(m.f, D);
  Json j = report::make("resolve-morphism", "cap:" + std::to_string(cap));
  j["inputs"]["morphism"] = morph;
  Json cells = Json::array();
  for (GenId c : r.cells) cells.push_back(r.ext.gen(c).name);
  Json zs = Json::array();
  for (GenId z : r.zs) zs.push_back(r.ext.gen(z).name);
  Json w = Json::object();
  w["generators"] = r.ext.ngens();
  w["copy"] = zs;
  w["cells"] = cells;
  j["witness"] = w;
  s.diagnostics.push_back("projection to '" + m.dst + "' is a quasi-isomorphism by construction");
  return s.emit(j, kOk);
}

int cmd_derived_tensor(Session& s, const std::string& fname, const std::string& gname, int cap) {
  if (cap < 1) throw UsageError("--cap must be at least 1");
  const auto& f = s.morphism(fname);
  const auto& g = s.morphism(gname);
  if (f.src != g.src)
    throw UsageError("morphisms '" + fname + "' and '" + gname + "' have different sources");
  DiagonalResolution D = diagonal_resolution(s.algebra(f.src), static_cast<std::uint32_t>(cap));
  DerivedTensor r = derived_tensor(f.f, g.f, D);
  Json j = report::make("derived-tensor", "cap:" + std::to_string(cap));
  j["inputs"]["left"] = fname;
  j["inputs"]["right"] = gname;
  Json cells = Json::array();
  for (GenId c : r.cells) cells.push_back(r.R.gen(c).name);
  Json w = Json::object();
  w["generators"] = r.R.ngens();
  w["left_generators"] = f.f.dst.ngens();
  w["right_generators"] = g.f.dst.ngens();
  w["cells"] = cells;
  j["witness"] = w;
  return s.emit(j, kOk);
}

struct KoszulArgs {
  int n = 0;
  std::vector<std::string> sections;
  std::string degrees;
  int max_weight = 8;
};

int cmd_koszul(Session& s, const KoszulArgs& a) {
  if (a.n < 1) throw UsageError("--vars must be at least 1");
  ResolvingAlgebra K = koszul(static_cast<std::size_t>(a.n), a.sections.size(),
                              [&](const ResolvingAlgebra& K0) {
                                std::vector<Poly> out;
                                for (auto& text : a.sections)
                                  out.push_back(dsl::parse_element(K0, text));
                                return out;
                              });
  if (!K.has_weights())
    throw UsageError("sections must be nonconstant and homogeneous so the weight grading exists");
  int lo = -static_cast<int>(a.sections.size()), hi = 0;
  if (!a.degrees.empty()) std::tie(lo, hi) = parse_window(a.degrees);
  std::map<int, std::size_t> dims = dims_weight(K, lo, hi, a.max_weight);
  Json j = report::make("koszul", "weight");
  j["inputs"]["vars"] = a.n;
  j["inputs"]["sections"] = a.sections;
  j["dimensions"] = report::degree_map(dims, lo, hi);
  return s.emit(j, kOk);
}

int cmd_linearize(Session& s, const std::string& morph, int ell) {
  if (ell < 1) throw UsageError("--ell must be at least 1");
  const auto& m = s.morphism(morph);
  const ResolvingAlgebra& B = m.f.src;
  const ResolvingAlgebra& A = m.f.dst;
  DerSlice S = der_slice_exact(B, m.f, -ell - 1, std::min(-ell + 1, 0));
  CohomologyAt h = cohomology(S.C, -ell);

  Derivation D{&B, &A, &m.f, -ell, std::vector<Poly>(B.ngens())};
  if (h.dim > 0) {
    const auto& basis = S.basis_at(-ell);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Rat& c = h.reps[0][i];
      if (c == 0) continue;
      auto& [slot, mono] = basis[i];
      D.val[S.gens[slot]] += Poly::term(A.scope(), c, mono);
    }
    s.diagnostics.push_back("witness built from the first derivation cohomology class");
  } else {
    s.diagnostics.push_back("derivation cohomology vanishes; witness is the constant simplex");
  }
  SimplexMorphism xi = xi_ell(D, ell);

  Json j = report::make("linearize", "ell:" + std::to_string(ell));
  j["inputs"]["morphism"] = morph;
  Json der = Json::object();
  for (GenId g = 0; g < B.ngens(); ++g) der[B.gen(g).name] = D.val[g].str();
  Json w = Json::object();
  w["der_dimensions"] = report::degree_map({{-ell, h.dim}}, -ell, -ell);
  w["derivation"] = der;
  w["simplex"] = report::simplex_values(xi);
  j["witness"] = w;
  return s.emit(j, kOk);
}

int cmd_obstruction(Session& s, const std::string& morph, const std::string& gen) {
  const auto& m = s.morphism(morph);
  auto x = m.f.src.find(gen);
  if (!x) throw UsageError("no generator '" + gen + "' in algebra '" + m.src + "'");
  ExtensionOutcome o = extension_obstruction(m.f, *x);
  bool extendable = o.extension.has_value();
  Json j = report::make("obstruction", "exact");
  j["inputs"]["morphism"] = morph;
  j["inputs"]["generator"] = gen;
  Json cls = Json::array();
  for (auto& c : o.obstruction.coords) cls.push_back(rat_str(c));
  Json w = Json::object();
  w["obstructed"] = !extendable;
  w["class_degree"] = o.obstruction.degree;
  w["class"] = cls;
  if (extendable) {
    w["extension"] = report::morphism_values(*o.extension);
    s.diagnostics.push_back("obstruction class vanishes; extension found");
  } else {
    w["extension"] = nullptr;
    s.diagnostics.push_back("obstruction class is nonzero");
  }
  j["witness"] = w;
  return s.emit(j, extendable ? kOk : kNegative);
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"exact arithmetic for resolving differential graded algebras"};
  app.require_subcommand(1);

  Session s;
  app.add_option("-f,--file", s.files, "workspace file(s) to load");
  app.add_flag("--pretty", s.pretty, "render an aligned text table instead of JSON");

  std::function<int()> run;

  {
    auto* c = app.add_subcommand("validate", "check every algebra, morphism, and point");
    c->callback([&] { run = [&] { return cmd_validate(s); }; });
  }
  {
    auto a = std::make_shared<CohomologyArgs>();
    auto* c = app.add_subcommand("cohomology", "cohomology dimensions over a degree window");
    c->add_option("algebra", a->alg, "algebra name")->required();
    c->add_option("--degrees", a->degrees, "window a..b")->required();
    c->add_option("--mode", a->mode, "exact | weight | truncate:N");
    c->add_option("--at", a->at, "point name (for truncate mode)");
    c->add_option("--max-weight", a->max_weight, "weight bound in weight mode");
    c->callback([&, a] { run = [&, a] { return cmd_cohomology(s, *a); }; });
  }
  {
    auto a = std::make_shared<std::string>();
    auto* c = app.add_subcommand("h0", "present the degree-0 cohomology ring");
    c->add_option("algebra", *a, "algebra name")->required();
    c->callback([&, a] { run = [&, a] { return cmd_h0(s, *a); }; });
  }
  {
    auto a = std::make_shared<std::pair<std::string, std::string>>();
    auto* c = app.add_subcommand("etale-at", "pointwise cotangent fiber test");
    c->add_option("morphism", a->first, "morphism name")->required();
    c->add_option("--at", a->second, "point on the target")->required();
    c->callback([&, a] { run = [&, a] { return cmd_etale(s, a->first, a->second); }; });
  }
  {
    auto a = std::make_shared<QisArgs>();
    auto* c = app.add_subcommand("qis", "quasi-isomorphism test");
    c->add_option("morphism", a->morph, "morphism name")->required();
    c->add_option("--mode", a->mode, "points | weight | h0");
    c->add_option("--at", a->at, "point name(s) for points mode");
    c->add_option("--level", a->level, "completion levels per point");
    c->add_option("--max-weight", a->max_weight, "weight bound in weight mode");
    c->callback([&, a] { run = [&, a] { return cmd_qis(s, *a); }; });
  }
  {
    auto a = std::make_shared<std::tuple<std::string, std::string, int>>("", "", 4);
    auto* c = app.add_subcommand("completion-compare",
                                 "compare truncated completions along a morphism");
    c->add_option("morphism", std::get<0>(*a), "morphism name")->required();
    c->add_option("--at", std::get<1>(*a), "point on the target")->required();
    c->add_option("--levels", std::get<2>(*a), "levels to verify");
    c->callback([&, a] {
      run = [&, a] { return cmd_completion(s, std::get<0>(*a), std::get<1>(*a), std::get<2>(*a)); };
    });
  }
  {
    auto a = std::make_shared<std::pair<std::string, std::string>>();
    auto* c = app.add_subcommand("perfect-at", "fiber cohomology of the Kähler module");
    c->add_option("algebra", a->first, "algebra name")->required();
    c->add_option("--at", a->second, "point on the algebra")->required();
    c->callback([&, a] { run = [&, a] { return cmd_perfect(s, a->first, a->second); }; });
  }
  {
    auto a = std::make_shared<std::pair<std::string, int>>("", 8);
    auto* c = app.add_subcommand("diagonal-resolve", "resolve the multiplication map");
    c->add_option("algebra", a->first, "algebra name")->required();
    c->add_option("--cap", a->second, "weight cap for cell searches");
    c->callback([&, a] { run = [&, a] { return cmd_diagonal(s, a->first, a->second); }; });
  }
  {
    auto a = std::make_shared<std::pair<std::string, int>>("", 8);
    auto* c = app.add_subcommand("resolve-morphism", "factor a morphism through a free extension");
    c->add_option("morphism", a->first, "morphism name")->required();
    c->add_option("--cap", a->second, "weight cap for the diagonal");
    c->callback([&, a] { run = [&, a] { return cmd_resolve_morphism(s, a->first, a->second); }; });
  }
  {
    auto a = std::make_shared<std::tuple<std::string, std::string, int>>("", "", 8);
    auto* c = app.add_subcommand("derived-tensor", "derived tensor product of two morphisms");
    c->add_option("left", std::get<0>(*a), "morphism name")->required();
    c->add_option("right", std::get<1>(*a), "morphism name")->required();
    c->add_option("--cap", std::get<2>(*a), "weight cap for the diagonal");
    c->callback([&, a] {
      run = [&, a] {
        return cmd_derived_tensor(s, std::get<0>(*a), std::get<1>(*a), std::get<2>(*a));
      };
    });
  }
  {
    auto a = std::make_shared<KoszulArgs>();
    auto* c = app.add_subcommand("koszul", "Koszul complex cohomology for a section list");
    c->add_option("--vars,-n", a->n, "number of degree-0 variables x1..xn")->required();
    c->add_option("sections", a->sections, "sections as expressions in x1..xn")->required();
    c->add_option("--degrees", a->degrees, "window a..b (default -m..0)");
    c->add_option("--max-weight", a->max_weight, "weight bound");
    c->callback([&, a] { run = [&, a] { return cmd_koszul(s, *a); }; });
  }
  {
    auto a = std::make_shared<std::pair<std::string, int>>("", 1);
    auto* c = app.add_subcommand("linearize",
                                 "derivation cohomology dimensions and a simplex witness");
    c->add_option("morphism", a->first, "module structure morphism")->required();
    c->add_option("--ell", a->second, "simplex dimension (>= 1)")->required();
    c->callback([&, a] { run = [&, a] { return cmd_linearize(s, a->first, a->second); }; });
  }
  {
    auto a = std::make_shared<std::pair<std::string, std::string>>();
    auto* c = app.add_subcommand("obstruction", "extension obstruction over one generator");
    c->add_option("morphism", a->first, "partial morphism")->required();
    c->add_option("--gen", a->second, "generator to extend over")->required();
    c->callback([&, a] { run = [&, a] { return cmd_obstruction(s, a->first, a->second); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    s.load();
    return run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const dsl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const gb::ResourceError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
