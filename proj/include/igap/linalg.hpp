#pragma once

// Exact integer linear algebra: determinants, rank, normal forms, kernel
// lattices, subdeterminant invariants and support restriction.

#include "igap/exact.hpp"

#include <optional>
#include <stdexcept>

namespace igap {

// ---------------------------------------------------------------------------
// Determinant and rank (fraction-free elimination)

inline Integer determinant(const IntegerMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntegerMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline std::size_t rank(const IntegerMatrix& m) {
  IntegerMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(p, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer t = a(i, j) * a(r, c) - a(i, c) * a(r, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, c) = 0;
    }
    prev = a(r, c);
    ++r;
  }
  return r;
}

/// A * A^T.
inline IntegerMatrix gramOfRows(const IntegerMatrix& a) {
  return a * a.transpose();
}

// ---------------------------------------------------------------------------
// Rational systems

using RationalMatrix = std::vector<RationalVector>;

inline RationalMatrix toRationalMatrix(const IntegerMatrix& a) {
  RationalMatrix r(a.rows(), RationalVector(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i][j] = a(i, j);
  return r;
}

/// Some solution of M x = rhs (free variables set to zero), or nullopt when
/// the system is inconsistent.
inline std::optional<RationalVector> solveAny(RationalMatrix m, RationalVector rhs) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<std::size_t> pivotCol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    std::swap(rhs[p], rhs[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivotCol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  RationalVector x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivotCol[i]] = rhs[i];
  return x;
}

/// Unique solution of a square nonsingular system, nullopt if singular.
inline std::optional<RationalVector> solveSquare(const IntegerMatrix& a,
                                                 const RationalVector& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size())
    throw Error(ErrorKind::DimensionMismatch, "solveSquare shape");
  if (rank(a) != a.rows()) return std::nullopt;
  return solveAny(toRationalMatrix(a), rhs);
}

// ---------------------------------------------------------------------------
// Hermite and Smith normal forms

struct EchelonForm {
  IntegerMatrix matrix;
  std::size_t rank = 0;
  std::vector<std::size_t> pivotColumns;
};

namespace detail {

// rows (r, i) <- [[s, t], [-b/g, a/g]] * (r, i); unimodular. Plain
// elimination when the pivot already divides.
inline void combineRows(IntegerMatrix& m, std::size_t r, std::size_t i,
                        std::size_t col) {
  const Integer a = m(r, col), b = m(i, col);
  if (a != 0 && mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
    const Integer q = b / a;
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= q * m(r, j);
    return;
  }
  auto [g, s, t] = extendedGcd(a, b);
  const Integer ag = a / g, bg = b / g;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer x = m(r, j), y = m(i, j);
    m(r, j) = s * x + t * y;
    m(i, j) = ag * y - bg * x;
  }
}

inline void combineColumns(IntegerMatrix& m, std::size_t c, std::size_t k,
                           std::size_t row) {
  const Integer a = m(row, c), b = m(row, k);
  if (a != 0 && mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
    const Integer q = b / a;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, k) -= q * m(i, c);
    return;
  }
  auto [g, s, t] = extendedGcd(a, b);
  const Integer ag = a / g, bg = b / g;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer x = m(i, c), y = m(i, k);
    m(i, c) = s * x + t * y;
    m(i, k) = ag * y - bg * x;
  }
}

}  // namespace detail

/// Row-style Hermite normal form using unimodular row operations, pivoting
/// only within the first `pivotLimit` columns. Pivots are positive and the
/// entries above each pivot are reduced into [0, pivot).
inline EchelonForm hermiteRowForm(IntegerMatrix m,
                                  std::size_t pivotLimit = std::size_t(-1)) {
  const std::size_t rows = m.rows();
  const std::size_t limit = std::min(pivotLimit, m.cols());
  EchelonForm out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < limit && r < rows; ++c) {
    for (std::size_t i = r + 1; i < rows; ++i)
      if (m(i, c) != 0) detail::combineRows(m, r, i, c);
    if (m(r, c) == 0) continue;
    if (m(r, c) < 0)
      for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), m(i, c).get_mpz_t(), m(r, c).get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= q * m(r, j);
    }
    out.pivotColumns.push_back(c);
    ++r;
  }
  out.rank = r;
  out.matrix = std::move(m);
  return out;
}

/// Invariant factors d_1 | d_2 | ... (nonzero diagonal of the Smith form).
inline IntegerVector smithInvariants(IntegerMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntegerVector factors;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m(i, j) != 0 &&
            (!best || abs(m(i, j)) < abs(m(best->first, best->second))))
          best = {i, j};
    if (!best) break;
    if (best->first != t)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(t, j), m(best->first, j));
    if (best->second != t)
      for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, t), m(i, best->second));

    for (;;) {
      for (std::size_t i = t + 1; i < rows; ++i)
        if (m(i, t) != 0) detail::combineRows(m, t, i, t);
      bool rowDirty = false;
      for (std::size_t j = t + 1; j < cols; ++j)
        if (m(t, j) != 0) {
          detail::combineColumns(m, t, j, t);
          rowDirty = true;
        }
      if (rowDirty) continue;
      bool columnDirty = false;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (m(i, t) != 0) columnDirty = true;
      if (columnDirty) continue;
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < rows && !offender; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(m(i, j).get_mpz_t(), m(t, t).get_mpz_t())) {
            offender = i;
            break;
          }
      if (!offender) break;
      for (std::size_t j = 0; j < cols; ++j) m(t, j) += m(*offender, j);
    }
    factors.push_back(abs(m(t, t)));
  }
  return factors;
}

// ---------------------------------------------------------------------------
// Kernel lattices

/// Integer basis of ker(A) ∩ Z^n, given as rows in Hermite normal form.
struct LatticeBasis {
  std::size_t ambientDim = 0;
  std::vector<IntegerVector> vectors;

  std::size_t rank() const { return vectors.size(); }
  IntegerMatrix asRows() const { return IntegerMatrix::fromRows(vectors, ambientDim); }
  /// det(Λ)^2, the Gram determinant of the basis.
  Integer gramDeterminant() const { return determinant(gramOfRows(asRows())); }
};

/// Kernel lattice of an arbitrary integer matrix (any rank, possibly no rows).
inline LatticeBasis integerKernel(const IntegerMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  // Row-reduce [A^T | I]; rows whose A^T part vanishes carry the kernel.
  IntegerMatrix aug(n, m + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug(i, j) = a(j, i);
    aug(i, m + i) = 1;
  }
  EchelonForm e = hermiteRowForm(std::move(aug), m);
  std::vector<IntegerVector> raw;
  for (std::size_t i = e.rank; i < n; ++i) {
    IntegerVector v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = e.matrix(i, m + j);
    raw.push_back(std::move(v));
  }
  LatticeBasis basis;
  basis.ambientDim = n;
  if (raw.empty()) return basis;
  EchelonForm h = hermiteRowForm(IntegerMatrix::fromRows(raw, n));
  for (std::size_t i = 0; i < h.rank; ++i) basis.vectors.push_back(h.matrix.rowVector(i));
  return basis;
}

inline LatticeBasis kernelLatticeBasis(const IntegerMatrix& a) {
  if (rank(a) != a.rows())
    throw Error(ErrorKind::RankDeficient, "kernel lattice needs full row rank");
  if (a.rows() >= a.cols())
    throw Error(ErrorKind::RankDeficient, "kernel lattice needs more columns than rows");
  return integerKernel(a);
}

/// True iff w is an integer combination of the basis vectors.
inline bool latticeContains(const LatticeBasis& basis, IntegerVector w) {
  if (w.size() != basis.ambientDim)
    throw Error(ErrorKind::DimensionMismatch, "lattice membership length");
  if (basis.vectors.empty())
    return std::all_of(w.begin(), w.end(), [](const Integer& x) { return x == 0; });
  EchelonForm h = hermiteRowForm(basis.asRows());
  for (std::size_t i = 0; i < h.rank; ++i) {
    const std::size_t p = h.pivotColumns[i];
    if (!mpz_divisible_p(w[p].get_mpz_t(), h.matrix(i, p).get_mpz_t())) return false;
    Integer coef = w[p] / h.matrix(i, p);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= coef * h.matrix(i, j);
  }
  return std::all_of(w.begin(), w.end(), [](const Integer& x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// Subdeterminant invariants

struct InvariantOptions {
  /// Maximum number of minors enumerated for the Δ_r table.
  std::uint64_t minorCap = 1'000'000;
};

struct MatrixInvariants {
  /// det(A A^T); Δ(A) is its square root.
  Integer gramDet;
  /// deltaR[r-1] = Δ_r(A), absent when enumeration exceeded the cap.
  std::vector<std::optional<Integer>> deltaR;
  /// gcd of all m×m minors (product of the Smith invariant factors).
  Integer gcdMinors;
  std::size_t rank = 0;
  /// Smith gcd matched the exhaustive m×m minor gcd.
  bool gcdCrossChecked = false;

  const Integer& delta1() const { return *deltaR.front(); }
  const std::optional<Integer>& deltaM() const { return deltaR.back(); }
  /// det(Λ(A))^2 = det(A A^T) / gcd(A)^2, an integer.
  Integer latticeDetSquared() const { return gramDet / (gcdMinors * gcdMinors); }
};

namespace detail {

struct MinorScan {
  Integer maxAbs = 0;
  Integer gcd = 0;
};

inline MinorScan scanMinors(const IntegerMatrix& a, std::size_t r) {
  MinorScan scan;
  auto rowSet = firstCombination(r);
  do {
    IntegerMatrix rowsOnly = a.selectRows(rowSet);
    auto colSet = firstCombination(r);
    do {
      Integer d = abs(determinant(rowsOnly.selectColumns(colSet)));
      if (d > scan.maxAbs) scan.maxAbs = d;
      scan.gcd = gcdOf(scan.gcd, d);
    } while (nextCombination(colSet, a.cols()));
  } while (nextCombination(rowSet, a.rows()));
  return scan;
}

}  // namespace detail

inline MatrixInvariants computeInvariants(const IntegerMatrix& a,
                                          const InvariantOptions& options = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m == 0) throw Error(ErrorKind::DimensionMismatch, "matrix has no rows");
  MatrixInvariants inv;
  inv.rank = rank(a);
  if (inv.rank != m)
    throw Error(ErrorKind::RankDeficient,
                "matrix has rank " + std::to_string(inv.rank) + " < " + std::to_string(m));
  inv.gramDet = determinant(gramOfRows(a));

  IntegerVector factors = smithInvariants(a);
  inv.gcdMinors = 1;
  for (const auto& f : factors) inv.gcdMinors *= f;

  std::uint64_t total = 0;
  const std::uint64_t cap = options.minorCap;
  for (std::size_t r = 1; r <= m; ++r) {
    std::uint64_t rowsChoose = binomialCapped(m, r, cap);
    std::uint64_t colsChoose = binomialCapped(n, r, cap);
    if (rowsChoose > cap || colsChoose > cap || rowsChoose * colsChoose > cap) {
      total = cap + 1;
      break;
    }
    total += rowsChoose * colsChoose;
    if (total > cap) break;
  }
  const bool full = total <= cap;

  inv.deltaR.assign(m, std::nullopt);
  Integer d1 = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) d1 = std::max(d1, Integer(abs(a(i, j))));
  inv.deltaR[0] = d1;
  for (std::size_t r = 2; r < m && full; ++r) inv.deltaR[r - 1] = detail::scanMinors(a, r).maxAbs;
  if (binomialCapped(n, m, cap) <= cap) {
    detail::MinorScan top = detail::scanMinors(a, m);
    inv.deltaR[m - 1] = top.maxAbs;
    if (top.gcd != inv.gcdMinors)
      throw std::logic_error("Smith gcd " + inv.gcdMinors.get_str() +
                             " disagrees with minor gcd " + top.gcd.get_str());
    inv.gcdCrossChecked = true;
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Restriction to a coordinate subset

struct RestrictedSystem {
  IndexSet columns;
  /// Full row rank, gcd of maximal minors equal to 1.
  IntegerMatrix matrix;
  IntegerVector rhs;
  RationalVector cost;
  /// det(Â Â^T).
  Integer gramDet;
  /// det(Â Â^T) · gcd(A)^2 <= det(A A^T).
  bool deltaWithinBound = false;
};

/// Replaces A_I x_I = b by an equivalent system Â x_I = b̂ whose rows span
/// the saturated row lattice (row space of A_I intersected with Z^I).
inline RestrictedSystem restrictInstance(const IntegerMatrix& a, const IntegerVector& b,
                                         const RationalVector& c, const IndexSet& columns) {
  if (b.size() != a.rows() || c.size() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "restriction input shapes");
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] >= a.cols() || (k > 0 && columns[k] <= columns[k - 1]))
      throw Error(ErrorKind::InvalidArgument, "index set must be sorted and in range");

  RestrictedSystem out;
  out.columns = columns;
  IntegerMatrix sub = a.selectColumns(columns);
  auto x0 = solveAny(toRationalMatrix(sub), toRational(b));
  if (!x0) throw Error(ErrorKind::InconsistentRestriction, "restricted system has no solution");

  LatticeBasis kernel = integerKernel(sub);
  LatticeBasis saturated = integerKernel(kernel.asRows());
  out.matrix = IntegerMatrix::fromRows(saturated.vectors, columns.size());
  out.rhs.resize(out.matrix.rows());
  for (std::size_t i = 0; i < out.matrix.rows(); ++i) {
    Rational v = 0;
    for (std::size_t j = 0; j < columns.size(); ++j) v += out.matrix(i, j) * (*x0)[j];
    if (!isIntegral(v))
      throw Error(ErrorKind::InconsistentRestriction,
                  "restricted affine subspace contains no integer point");
    out.rhs[i] = v.get_num();
  }
  for (std::size_t j : columns) out.cost.push_back(c[j]);

  out.gramDet = determinant(gramOfRows(out.matrix));
  IntegerVector factors = smithInvariants(a);
  Integer g = 1;
  for (const auto& f : factors) g *= f;
  out.deltaWithinBound = out.gramDet * g * g <= determinant(gramOfRows(a));
  return out;
}

}  // namespace igap
