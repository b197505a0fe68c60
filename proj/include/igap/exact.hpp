#pragma once

// Exact scalar, vector and matrix types shared by every module, plus the
// library-wide error type.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace igap {

using Integer = mpz_class;
using Rational = mpq_class;
using IntegerVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;
/// Sorted, duplicate-free list of zero-based column indices.
using IndexSet = std::vector<std::size_t>;

enum class ErrorKind {
  RankDeficient,
  InconsistentRestriction,
  Infeasible,
  Unbounded,
  BudgetExceeded,
  NotApplicable,
  NoIntegerPoint,
  SingularMatrix,
  BadOrthogonalComplement,
  DimensionMismatch,
  DegenerateKernel,
  InvalidArgument,
  Parse,
};

inline const char* toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::InconsistentRestriction: return "inconsistent-restriction";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Unbounded: return "unbounded";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::NoIntegerPoint: return "no-integer-point";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::BadOrthogonalComplement: return "bad-orthogonal-complement";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::DegenerateKernel: return "degenerate-kernel";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_)
        throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
      for (long v : row) entries_.emplace_back(v);
    }
  }

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntegerMatrix fromRows(const std::vector<IntegerVector>& rows,
                                std::size_t cols) {
    IntegerMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw Error(ErrorKind::DimensionMismatch, "ragged row list");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<const Integer> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<Integer> row(std::size_t i) {
    return {entries_.data() + i * cols_, cols_};
  }
  IntegerVector rowVector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }
  IntegerVector column(std::size_t j) const {
    IntegerVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  IntegerMatrix transpose() const {
    IntegerMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntegerMatrix selectColumns(std::span<const std::size_t> cols) const {
    IntegerMatrix s(rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols.size(); ++k)
        s(i, k) = (*this)(i, cols[k]);
    return s;
  }

  IntegerMatrix selectRows(std::span<const std::size_t> rowIdx) const {
    IntegerMatrix s(rowIdx.size(), cols_);
    for (std::size_t k = 0; k < rowIdx.size(); ++k)
      for (std::size_t j = 0; j < cols_; ++j) s(k, j) = (*this)(rowIdx[k], j);
    return s;
  }

  IntegerMatrix operator*(const IntegerMatrix& rhs) const {
    if (cols_ != rhs.rows_)
      throw Error(ErrorKind::DimensionMismatch, "matrix product shape");
    IntegerMatrix p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Integer& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) p(i, j) += a * rhs(k, j);
      }
    return p;
  }

  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

// ---------------------------------------------------------------------------
// Small helpers

inline Rational makeRational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p", "-p" or "p/q" exactly. Rejects decimals and exponents.
inline Rational parseRational(std::string_view text) {
  auto isDigits = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char ch) { return ch >= '0' && ch <= '9'; });
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!isDigits(num) || !isDigits(den) || den.front() == '-' || den.front() == '+')
    throw Error(ErrorKind::Parse, "not an exact rational: '" + std::string(text) + "'");
  auto strip = [](std::string_view s) {
    return std::string(s.front() == '+' ? s.substr(1) : s);
  };
  Integer p(strip(num), 10);
  Integer q(strip(den), 10);
  return makeRational(p, q);
}

inline Integer parseInteger(std::string_view text) {
  Rational q = parseRational(text);
  if (q.get_den() != 1)
    throw Error(ErrorKind::Parse, "not an integer: '" + std::string(text) + "'");
  return q.get_num();
}

inline std::string toString(const Integer& z) { return z.get_str(); }
inline std::string toString(const Rational& q) { return q.get_str(); }

inline RationalVector toRational(const IntegerVector& v) {
  return RationalVector(v.begin(), v.end());
}

inline bool isIntegral(const Rational& q) { return q.get_den() == 1; }

inline Integer floorOf(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceilOf(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer absOf(const Integer& z) { return abs(z); }

inline Integer gcdOf(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcmOf(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
inline std::tuple<Integer, Integer, Integer> extendedGcd(const Integer& a,
                                                         const Integer& b) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return {g, s, t};
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "dot product length");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const RationalVector& a, const IntegerVector& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "dot product length");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline IntegerVector multiply(const IntegerMatrix& a, const IntegerVector& x) {
  if (a.cols() != x.size())
    throw Error(ErrorKind::DimensionMismatch, "matrix-vector shape");
  IntegerVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline RationalVector multiply(const IntegerMatrix& a, const RationalVector& x) {
  if (a.cols() != x.size())
    throw Error(ErrorKind::DimensionMismatch, "matrix-vector shape");
  RationalVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) y[i] += a(i, j) * x[j];
  return y;
}

inline IndexSet supportOf(const IntegerVector& z) {
  IndexSet s;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] != 0) s.push_back(i);
  return s;
}

inline IndexSet supportOf(const RationalVector& z) {
  IndexSet s;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] != 0) s.push_back(i);
  return s;
}

/// Advances `combo` (sorted k-subset of [0,n)) to the next subset in
/// lexicographic order. Returns false after the last one.
inline bool nextCombination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<std::size_t> firstCombination(std::size_t k) {
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), std::size_t{0});
  return c;
}

/// C(n,k) saturated at `cap + 1` so callers can compare against budgets
/// without overflow.
inline std::uint64_t binomialCapped(std::uint64_t n, std::uint64_t k,
                                    std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Integer r = binomial(n, k);
  if (r > Integer(std::to_string(cap))) return cap + 1;
  return std::stoull(r.get_str());
}

}  // namespace igap
