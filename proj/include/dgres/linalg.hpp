#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dgres/algebra.hpp"  // ValidationReport
#include "dgres/rational.hpp"

namespace dgres {

using QVec = std::vector<Rat>;

// Sparse rational matrix; shape is explicit, absent entries are zero.
class QMat {
 public:
  QMat() = default;
  QMat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols) {}

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }

  void set(std::size_t i, std::size_t j, Rat v) {
    check(i, j);
    if (v == 0)
      a_.erase({i, j});
    else
      a_[{i, j}] = std::move(v);
  }
  void add(std::size_t i, std::size_t j, const Rat& v) {
    check(i, j);
    auto [it, ins] = a_.try_emplace({i, j}, v);
    if (!ins) {
      it->second += v;
      if (it->second == 0) a_.erase(it);
    }
  }
  Rat get(std::size_t i, std::size_t j) const {
    auto it = a_.find({i, j});
    return it == a_.end() ? Rat(0) : it->second;
  }
  const std::map<std::pair<std::size_t, std::size_t>, Rat>& entries() const { return a_; }
  std::size_t nonzeros() const { return a_.size(); }

  QVec apply(const QVec& x) const {
    if (x.size() != c_) throw std::invalid_argument("matrix-vector shape mismatch");
    QVec y(r_, Rat(0));
    for (auto& [ij, v] : a_) y[ij.first] += v * x[ij.second];
    return y;
  }

  friend QMat operator*(const QMat& a, const QMat& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product shape mismatch");
    QMat p(a.r_, b.c_);
    for (auto& [ij, v] : a.a_)
      for (std::size_t k = 0; k < b.c_; ++k) {
        Rat w = b.get(ij.second, k);
        if (w != 0) p.add(ij.first, k, v * w);
      }
    return p;
  }

  bool is_zero() const { return a_.empty(); }

  static QMat from_columns(std::size_t rows, const std::vector<QVec>& cols) {
    QMat m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i)
        if (cols[j][i] != 0) m.set(i, j, cols[j][i]);
    return m;
  }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= r_ || j >= c_) throw std::out_of_range("matrix index");
  }
  std::size_t r_ = 0, c_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, Rat> a_;
};

namespace detail {

// Fraction-free (Bareiss) forward elimination of an integer matrix. Pivoting
// is deterministic: columns left to right, first row with a nonzero entry.
// `aug` columns ride along (exempt from pivoting); all divisions are exact.
struct Echelon {
  std::vector<std::vector<mpz_class>> m;  // rows x (cols + aug)
  std::vector<std::size_t> pivot_col;     // per pivot row, ascending
  std::size_t cols = 0;                   // pivot-eligible columns
};

inline Echelon bareiss(std::vector<std::vector<mpz_class>> m, std::size_t cols) {
  Echelon e;
  e.cols = cols;
  std::size_t rows = m.size();
  std::size_t width = rows == 0 ? 0 : m[0].size();
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = row; i < rows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != row) std::swap(m[piv], m[row]);
    for (std::size_t i = row + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < width; ++j) {
        mpz_class t = m[row][c] * m[i][j] - m[i][c] * m[row][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = t;
      }
      m[i][c] = 0;
    }
    prev = m[row][c];
    e.pivot_col.push_back(c);
    ++row;
  }
  e.m = std::move(m);
  return e;
}

// Integer rows of [A | aug...] with per-row denominators cleared.
inline std::vector<std::vector<mpz_class>> scaled_rows(const QMat& a,
                                                       const std::vector<const QVec*>& aug,
                                                       std::vector<mpz_class>* scales = nullptr) {
  std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::vector<Rat>> dense(rows, std::vector<Rat>(cols + aug.size(), Rat(0)));
  for (auto& [ij, v] : a.entries()) dense[ij.first][ij.second] = v;
  for (std::size_t k = 0; k < aug.size(); ++k)
    for (std::size_t i = 0; i < rows; ++i) dense[i][cols + k] = (*aug[k])[i];
  std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols + aug.size()));
  for (std::size_t i = 0; i < rows; ++i) {
    mpz_class l = 1;
    for (auto& v : dense[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    for (std::size_t j = 0; j < dense[i].size(); ++j) {
      Rat t = dense[i][j] * Rat(l);
      t.canonicalize();
      m[i][j] = t.get_num();
    }
    if (scales) scales->push_back(l);
  }
  return m;
}

}  // namespace detail

inline std::size_t rank(const QMat& a) {
  return detail::bareiss(detail::scaled_rows(a, {}), a.cols()).pivot_col.size();
}

// Basis of the right kernel, one vector per free column in ascending column
// order, with value 1 at the free coordinate.
inline std::vector<QVec> kernel_basis(const QMat& a) {
  auto e = detail::bareiss(detail::scaled_rows(a, {}), a.cols());
  std::size_t rank = e.pivot_col.size();
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : e.pivot_col) is_pivot[c] = true;
  std::vector<QVec> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVec v(a.cols(), Rat(0));
    v[f] = 1;
    for (std::size_t r = rank; r-- > 0;) {
      std::size_t pc = e.pivot_col[r];
      Rat s(0);
      for (std::size_t j = pc + 1; j < a.cols(); ++j)
        if (v[j] != 0) s += Rat(e.m[r][j]) * v[j];
      v[pc] = -s / Rat(e.m[r][pc]);
      v[pc].canonicalize();
    }
    out.push_back(std::move(v));
  }
  return out;
}

struct SolveOutcome {
  std::optional<QVec> solution;      // free coordinates set to zero
  std::optional<QVec> inconsistent;  // y with y^T A = 0 and y^T b != 0
};

// Solves A x = b exactly. On failure returns a row combination certifying
// inconsistency (Fredholm alternative), verified by the caller if desired.
inline SolveOutcome solve(const QMat& a, const QVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: rhs size mismatch");
  std::size_t rows = a.rows(), cols = a.cols();
  // Augment with b and an identity block to track row operations.
  std::vector<mpz_class> scales;
  auto m = detail::scaled_rows(a, {&b}, &scales);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < rows; ++j) m[i].push_back(i == j ? 1 : 0);
  }
  auto e = detail::bareiss(std::move(m), cols);
  std::size_t rk = e.pivot_col.size();
  for (std::size_t r = rk; r < rows; ++r) {
    if (e.m[r][cols] != 0) {  // 0 = b_transformed, but row of A-part is zero
      QVec y(rows, Rat(0));
      for (std::size_t i = 0; i < rows; ++i) {
        Rat t = Rat(e.m[r][cols + 1 + i]) * Rat(scales[i]);
        t.canonicalize();
        y[i] = t;
      }
      return {std::nullopt, std::move(y)};
    }
  }
  QVec x(cols, Rat(0));
  for (std::size_t r = rk; r-- > 0;) {
    std::size_t pc = e.pivot_col[r];
    Rat s = Rat(e.m[r][cols]);
    for (std::size_t j = pc + 1; j < cols; ++j)
      if (x[j] != 0) s -= Rat(e.m[r][j]) * x[j];
    x[pc] = s / Rat(e.m[r][pc]);
    x[pc].canonicalize();
  }
  return {std::move(x), std::nullopt};
}

// A bounded cochain complex: dims[i] is the dimension in degree lo + i and
// maps[i] the differential from degree lo + i to lo + i + 1 (so maps has one
// entry fewer than dims).
struct FiniteComplex {
  int lo = 0;
  std::vector<std::size_t> dims;
  std::vector<QMat> maps;

  int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
  bool in_range(int n) const { return n >= lo && n <= hi(); }
  std::size_t dim_at(int n) const { return in_range(n) ? dims[n - lo] : 0; }
  const QMat* map_at(int n) const {  // d : degree n -> n+1
    int i = n - lo;
    if (i < 0 || i >= static_cast<int>(maps.size())) return nullptr;
    return &maps[i];
  }

  ValidationReport validate() const {
    ValidationReport rep;
    if (maps.size() + 1 != dims.size() && !(dims.empty() && maps.empty()))
      rep.fail("complex shape: need one map per adjacent pair of degrees");
    for (std::size_t i = 0; i < maps.size(); ++i) {
      if (maps[i].cols() != dims[i] || maps[i].rows() != dims[i + 1])
        rep.fail("map " + std::to_string(i) + " has wrong shape");
    }
    for (std::size_t i = 0; i + 1 < maps.size(); ++i)
      if (!(maps[i + 1] * maps[i]).is_zero())
        rep.fail("d\xc2\xb2 != 0 between degrees " + std::to_string(lo + static_cast<int>(i)) +
                 " and " + std::to_string(lo + static_cast<int>(i) + 2));
    return rep;
  }
};

struct CohomologyAt {
  std::size_t dim = 0;
  std::vector<QVec> reps;  // cocycles spanning h^n modulo coboundaries
};

// h^n = ker(d_n) / im(d_{n-1}). At the bottom of the window there is no
// incoming differential; callers decide whether that boundary is meaningful.
inline CohomologyAt cohomology(const FiniteComplex& C, int n) {
  CohomologyAt out;
  if (!C.in_range(n) || C.dim_at(n) == 0) return out;
  std::size_t dn = C.dim_at(n);
  std::vector<QVec> cycles;
  if (const QMat* d = C.map_at(n); d && C.in_range(n + 1)) {
    cycles = kernel_basis(*d);
  } else {
    for (std::size_t i = 0; i < dn; ++i) {
      QVec v(dn, Rat(0));
      v[i] = 1;
      cycles.push_back(std::move(v));
    }
  }
  // Image columns of the incoming differential.
  std::vector<QVec> cols;
  if (const QMat* din = C.map_at(n - 1); din && C.in_range(n - 1)) {
    for (std::size_t j = 0; j < din->cols(); ++j) {
      QVec v(dn, Rat(0));
      for (std::size_t i = 0; i < dn; ++i) v[i] = din->get(i, j);
      cols.push_back(std::move(v));
    }
  }
  std::size_t base_rank = rank(QMat::from_columns(dn, cols));
  for (auto& z : cycles) {
    cols.push_back(z);
    std::size_t r = rank(QMat::from_columns(dn, cols));
    if (r > base_rank) {
      base_rank = r;
      out.reps.push_back(z);
    } else {
      cols.pop_back();
    }
  }
  out.dim = out.reps.size();
  return out;
}

// Coordinates of the class [w] in terms of cohomology representatives at
// degree n: solves [reps | image] c = w and returns the reps part.
inline std::optional<QVec> class_coordinates(const FiniteComplex& C, int n,
                                             const std::vector<QVec>& reps, const QVec& w) {
  std::size_t dn = C.dim_at(n);
  std::vector<QVec> cols = reps;
  if (const QMat* din = C.map_at(n - 1); din && C.in_range(n - 1)) {
    for (std::size_t j = 0; j < din->cols(); ++j) {
      QVec v(dn, Rat(0));
      for (std::size_t i = 0; i < dn; ++i) v[i] = din->get(i, j);
      cols.push_back(std::move(v));
    }
  }
  auto sol = solve(QMat::from_columns(dn, cols), w);
  if (!sol.solution) return std::nullopt;
  QVec c(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) c[i] = (*sol.solution)[i];
  return c;
}

// Matrix of the induced map h^n(F) : h^n(C) -> h^n(D) for a chain map given
// degreewise by `Fn` (dim_D x dim_C). Throws if Fn does not send cycles to
// cycles up to boundaries (i.e. if F is not a chain map).
inline QMat induced_on_cohomology(const FiniteComplex& C, const FiniteComplex& D, int n,
                                  const QMat& Fn, const CohomologyAt& hc,
                                  const CohomologyAt& hd) {
  QMat out(hd.reps.size(), hc.reps.size());
  for (std::size_t j = 0; j < hc.reps.size(); ++j) {
    QVec w = Fn.apply(hc.reps[j]);
    auto coords = class_coordinates(D, n, hd.reps, w);
    if (!coords) throw std::logic_error("induced map: image of a cycle is not a cycle class");
    for (std::size_t i = 0; i < coords->size(); ++i)
      if ((*coords)[i] != 0) out.set(i, j, (*coords)[i]);
  }
  return out;
}

}  // namespace dgres
