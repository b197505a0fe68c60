#pragma once

// Dense exact-rational two-phase simplex for min{c·x : Mx = rhs, x >= 0}
// with Bland's anti-cycling rule. Rows may be linearly dependent; redundant
// rows are detected after phase one and dropped.

#include "igap/linalg.hpp"

namespace igap::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  /// Optimal vertex, or the phase-one vertex for feasibility-only runs.
  RationalVector x;
  /// Basic structural columns, sorted.
  IndexSet basis;
  Rational value;
  /// Unbounded: direction r >= 0 with M r = 0 and c·r < 0.
  RationalVector ray;
  /// Infeasible: y with y^T M >= 0 and y·rhs < 0.
  RationalVector farkas;
};

class Tableau {
 public:
  Tableau(const RationalMatrix& a, const RationalVector& rhs)
      : rows_(a.size()), cols_(rows_ == 0 ? 0 : a[0].size()) {
    sign_.assign(rows_, 1);
    t_.assign(rows_, RationalVector(cols_ + rows_ + 1));
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (a[i].size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged LP matrix");
      sign_[i] = rhs[i] < 0 ? -1 : 1;
      for (std::size_t j = 0; j < cols_; ++j) t_[i][j] = sign_[i] * a[i][j];
      t_[i][cols_ + i] = 1;
      t_[i][rhsCol()] = sign_[i] * rhs[i];
      basis_[i] = cols_ + i;
    }
    obj_.assign(cols_ + rows_ + 1, 0);
  }

  std::size_t rhsCol() const { return cols_ + rows_; }

  LpOutcome solve(const RationalVector& cost, bool feasibilityOnly,
                  std::uint64_t pivotCap) {
    LpOutcome out;
    pivotCap_ = pivotCap;
    // Phase one: minimise the sum of artificials.
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j <= rhsCol(); ++j)
        if (j < cols_ || j == rhsCol()) obj_[j] -= t_[i][j];
    runPhase(cols_ + rows_, /*allowUnbounded=*/false);
    if (-obj_[rhsCol()] > 0) {
      out.status = LpStatus::Infeasible;
      out.farkas.resize(rows_);
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rational dual = 1 - obj_[cols_ + i];
        out.farkas[i] = -dual * sign_[i];
      }
      return out;
    }
    evictArtificials();
    if (feasibilityOnly) {
      out.status = LpStatus::Optimal;
      fillPoint(out, RationalVector(cols_));
      return out;
    }
    // Phase two.
    std::fill(obj_.begin(), obj_.end(), Rational(0));
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const Rational cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= rhsCol(); ++j) obj_[j] -= cb * t_[i][j];
    }
    auto unboundedColumn = runPhase(cols_, /*allowUnbounded=*/true);
    if (unboundedColumn) {
      out.status = LpStatus::Unbounded;
      out.ray.assign(cols_, 0);
      out.ray[*unboundedColumn] = 1;
      for (std::size_t i = 0; i < t_.size(); ++i)
        if (basis_[i] < cols_) out.ray[basis_[i]] = -t_[i][*unboundedColumn];
      return out;
    }
    out.status = LpStatus::Optimal;
    fillPoint(out, cost);
    return out;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    if (++pivots_ > pivotCap_)
      throw Error(ErrorKind::BudgetExceeded, "simplex pivot cap exceeded");
    const Rational inv = 1 / t_[r][c];
    for (auto& v : t_[r]) v *= inv;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || t_[i][c] == 0) continue;
      const Rational f = t_[i][c];
      for (std::size_t j = 0; j <= rhsCol(); ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
    }
    if (obj_[c] != 0) {
      const Rational f = obj_[c];
      for (std::size_t j = 0; j <= rhsCol(); ++j)
        if (t_[r][j] != 0) obj_[j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  // Bland's rule over columns [0, allowedCols). Returns the entering column
  // when the objective is unbounded along it.
  std::optional<std::size_t> runPhase(std::size_t allowedCols, bool allowUnbounded) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < allowedCols; ++j)
        if (obj_[j] < 0) {
          entering = j;
          break;
        }
      if (!entering) return std::nullopt;
      std::optional<std::size_t> leaving;
      Rational bestRatio;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][*entering] <= 0) continue;
        Rational ratio = t_[i][rhsCol()] / t_[i][*entering];
        if (!leaving || ratio < bestRatio ||
            (ratio == bestRatio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          bestRatio = ratio;
        }
      }
      if (!leaving) {
        if (allowUnbounded) return entering;
        throw std::logic_error("phase one cannot be unbounded");
      }
      pivot(*leaving, *entering);
    }
  }

  void evictArtificials() {
    for (std::size_t i = 0; i < t_.size();) {
      if (basis_[i] < cols_) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < cols_; ++j)
        if (t_[i][j] != 0) {
          col = j;
          break;
        }
      if (col) {
        pivot(i, *col);
        ++i;
      } else {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  void fillPoint(LpOutcome& out, const RationalVector& cost) const {
    out.x.assign(cols_, 0);
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (basis_[i] < cols_) out.x[basis_[i]] = t_[i][rhsCol()];
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (basis_[i] < cols_) out.basis.push_back(basis_[i]);
    std::sort(out.basis.begin(), out.basis.end());
    out.value = 0;
    for (std::size_t j = 0; j < cols_; ++j) out.value += cost[j] * out.x[j];
  }

  std::size_t rows_, cols_;
  std::vector<int> sign_;
  RationalMatrix t_;
  RationalVector obj_;
  std::vector<std::size_t> basis_;
  std::uint64_t pivots_ = 0;
  std::uint64_t pivotCap_ = 0;
};

inline LpOutcome simplex(const RationalMatrix& a, const RationalVector& rhs,
                         const RationalVector& cost, bool feasibilityOnly = false,
                         std::uint64_t pivotCap = 1'000'000) {
  if (a.size() != rhs.size()) throw Error(ErrorKind::DimensionMismatch, "LP rhs length");
  Tableau tableau(a, rhs);
  const std::size_t cols = a.empty() ? cost.size() : a[0].size();
  if (cost.size() != cols) throw Error(ErrorKind::DimensionMismatch, "LP cost length");
  if (a.empty()) {
    // No rows: x = 0 is feasible; unbounded iff some cost is negative.
    LpOutcome out;
    out.x.assign(cols, 0);
    out.value = 0;
    for (std::size_t j = 0; j < cols && !feasibilityOnly; ++j)
      if (cost[j] < 0) {
        out.status = LpStatus::Unbounded;
        out.ray.assign(cols, 0);
        out.ray[j] = 1;
        return out;
      }
    out.status = LpStatus::Optimal;
    return out;
  }
  return tableau.solve(cost, feasibilityOnly, pivotCap);
}

}  // namespace igap::detail
