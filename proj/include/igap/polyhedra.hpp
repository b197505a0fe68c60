#pragma once

// Standard-form polyhedra P(A,b) = {x >= 0 : Ax = b}: feasibility with Farkas
// certificates, exact LP optima, vertex enumeration and boundedness tests.

#include "igap/simplex.hpp"

#include <map>
#include <variant>

namespace igap {

/// Problem datum (A, b, c) with A of full row rank m < n.
struct Instance {
  IntegerMatrix A;
  IntegerVector b;
  RationalVector c;

  std::size_t rows() const { return A.rows(); }
  std::size_t cols() const { return A.cols(); }

  /// Throws unless the shape and rank invariants hold.
  void validate() const {
    if (A.rows() == 0 || A.cols() == 0)
      throw Error(ErrorKind::DimensionMismatch, "A must be nonempty");
    if (b.size() != A.rows())
      throw Error(ErrorKind::DimensionMismatch,
                  "b has length " + std::to_string(b.size()) + ", expected " +
                      std::to_string(A.rows()));
    if (c.size() != A.cols())
      throw Error(ErrorKind::DimensionMismatch,
                  "c has length " + std::to_string(c.size()) + ", expected " +
                      std::to_string(A.cols()));
    if (A.rows() >= A.cols())
      throw Error(ErrorKind::DimensionMismatch, "need fewer rows than columns");
    if (rank(A) != A.rows())
      throw Error(ErrorKind::RankDeficient, "A does not have full row rank");
  }

  static Instance make(IntegerMatrix a, IntegerVector b, RationalVector c) {
    Instance inst{std::move(a), std::move(b), std::move(c)};
    inst.validate();
    return inst;
  }

  Instance withCost(RationalVector cost) const { return {A, b, std::move(cost)}; }
  Instance withRhs(IntegerVector rhs) const { return {A, std::move(rhs), c}; }
};

struct VertexSolution {
  RationalVector x;
  /// Lexicographically smallest basis producing x.
  IndexSet basis;
  Rational value;
};

struct UnboundedRay {
  RationalVector ray;
};

struct FeasibilityResult {
  bool feasible = false;
  RationalVector witness;
  /// y with y^T A >= 0 and y·b < 0 when infeasible.
  RationalVector farkas;
};

struct PolyhedronOptions {
  /// Cap on the number of candidate bases examined by exhaustive scans.
  std::uint64_t basisCap = 1'000'000;
};

namespace detail {

inline LpOutcome solveInstanceLp(const Instance& inst, const RationalVector& cost,
                                 bool feasibilityOnly = false) {
  return simplex(toRationalMatrix(inst.A), toRational(inst.b), cost, feasibilityOnly);
}

inline bool inPolyhedron(const Instance& inst, const RationalVector& x) {
  if (x.size() != inst.cols()) return false;
  for (const auto& v : x)
    if (v < 0) return false;
  RationalVector ax = multiply(inst.A, x);
  for (std::size_t i = 0; i < ax.size(); ++i)
    if (ax[i] != inst.b[i]) return false;
  return true;
}

/// Basic solution for a candidate basis, nullopt when A_B is singular.
inline std::optional<RationalVector> basicSolution(const Instance& inst, const IndexSet& basis) {
  auto xb = solveSquare(inst.A.selectColumns(basis), toRational(inst.b));
  if (!xb) return std::nullopt;
  RationalVector x(inst.cols());
  for (std::size_t k = 0; k < basis.size(); ++k) x[basis[k]] = (*xb)[k];
  return x;
}

}  // namespace detail

/// Lexicographically smallest basis B (|B| = m, A_B nonsingular) with
/// supp(x) ⊆ B. Greedy completion of the support is lexicographically
/// minimal because column independence forms a matroid.
inline IndexSet canonicalBasis(const IntegerMatrix& a, const RationalVector& x) {
  IndexSet chosen = supportOf(x);
  if (rank(a.selectColumns(chosen)) != chosen.size())
    throw Error(ErrorKind::InvalidArgument, "point is not a basic solution");
  for (std::size_t j = 0; j < a.cols() && chosen.size() < a.rows(); ++j) {
    if (std::binary_search(chosen.begin(), chosen.end(), j)) continue;
    IndexSet trial = chosen;
    trial.insert(std::upper_bound(trial.begin(), trial.end(), j), j);
    if (rank(a.selectColumns(trial)) == trial.size()) chosen = std::move(trial);
  }
  return chosen;
}

inline bool satisfiesVertexInvariants(const Instance& inst, const VertexSolution& v) {
  if (!detail::inPolyhedron(inst, v.x) || v.basis.size() != inst.rows()) return false;
  for (std::size_t j = 0; j < inst.cols(); ++j)
    if (!std::binary_search(v.basis.begin(), v.basis.end(), j) && v.x[j] != 0) return false;
  if (rank(inst.A.selectColumns(v.basis)) != inst.rows()) return false;
  return v.value == dot(inst.c, v.x);
}

inline FeasibilityResult isFeasible(const Instance& inst) {
  detail::LpOutcome lp = detail::solveInstanceLp(inst, RationalVector(inst.cols()), true);
  FeasibilityResult r;
  r.feasible = lp.status != detail::LpStatus::Infeasible;
  if (r.feasible)
    r.witness = std::move(lp.x);
  else
    r.farkas = std::move(lp.farkas);
  return r;
}

/// Checks y^T A >= 0 and y·b < 0 exactly.
inline bool verifiesFarkas(const Instance& inst, const RationalVector& y) {
  if (y.size() != inst.rows()) return false;
  for (std::size_t j = 0; j < inst.cols(); ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < inst.rows(); ++i) s += y[i] * inst.A(i, j);
    if (s < 0) return false;
  }
  Rational yb = 0;
  for (std::size_t i = 0; i < inst.rows(); ++i) yb += y[i] * inst.b[i];
  return yb < 0;
}

using LpResult = std::variant<VertexSolution, UnboundedRay>;

/// Exact LP optimum. Among optimal vertices the one with the
/// lexicographically smallest basis is returned; the basis scan is skipped
/// (simplex vertex kept) when C(n,m) exceeds the cap.
inline LpResult lpSolve(const Instance& inst, const PolyhedronOptions& options = {}) {
  detail::LpOutcome lp = detail::solveInstanceLp(inst, inst.c);
  if (lp.status == detail::LpStatus::Infeasible)
    throw Error(ErrorKind::Infeasible, "P(A,b) is empty");
  if (lp.status == detail::LpStatus::Unbounded) return UnboundedRay{std::move(lp.ray)};

  const std::size_t m = inst.rows(), n = inst.cols();
  if (binomialCapped(n, m, options.basisCap) <= options.basisCap) {
    IndexSet basis = firstCombination(m);
    do {
      auto x = detail::basicSolution(inst, basis);
      if (!x) continue;
      if (std::any_of(x->begin(), x->end(), [](const Rational& v) { return v < 0; })) continue;
      if (dot(inst.c, *x) != lp.value) continue;
      return VertexSolution{std::move(*x), basis, lp.value};
    } while (nextCombination(basis, n));
    throw std::logic_error("optimal value not attained at any basis");
  }
  return VertexSolution{lp.x, canonicalBasis(inst.A, lp.x), lp.value};
}

/// All vertices, each once, in order of their lexicographically smallest basis.
inline std::vector<VertexSolution> enumerateVertices(const Instance& inst,
                                                     const PolyhedronOptions& options = {}) {
  const std::size_t m = inst.rows(), n = inst.cols();
  if (binomialCapped(n, m, options.basisCap) > options.basisCap)
    throw Error(ErrorKind::BudgetExceeded, "too many candidate bases");
  std::vector<VertexSolution> out;
  std::map<RationalVector, std::size_t> seen;
  IndexSet basis = firstCombination(m);
  do {
    auto x = detail::basicSolution(inst, basis);
    if (!x) continue;
    if (std::any_of(x->begin(), x->end(), [](const Rational& v) { return v < 0; })) continue;
    if (seen.contains(*x)) continue;
    seen.emplace(*x, out.size());
    Rational value = dot(inst.c, *x);
    out.push_back(VertexSolution{std::move(*x), basis, std::move(value)});
  } while (nextCombination(basis, n));
  if (out.empty()) throw Error(ErrorKind::Infeasible, "P(A,b) is empty");
  return out;
}

/// True iff c·x is bounded below on P(A,b) (checked on the recession cone).
inline bool isIpBounded(const Instance& inst) {
  Instance cone = inst.withRhs(IntegerVector(inst.rows(), 0));
  return std::holds_alternative<VertexSolution>(lpSolve(cone, {.basisCap = 0}));
}

/// True iff P(A,b) has no nonzero recession direction (P is a polytope).
inline bool isPolytope(const Instance& inst) {
  Instance cone = inst.withRhs(IntegerVector(inst.rows(), 0));
  return isIpBounded(cone.withCost(RationalVector(inst.cols(), -1)));
}

/// max x_j over P(A,b) for every coordinate; requires a nonempty polytope.
inline RationalVector coordinateMaxima(const Instance& inst) {
  if (!isPolytope(inst))
    throw Error(ErrorKind::Unbounded, "P(A,b) is unbounded; an explicit box is required");
  RationalVector maxima(inst.cols());
  for (std::size_t j = 0; j < inst.cols(); ++j) {
    RationalVector cost(inst.cols(), 0);
    cost[j] = -1;
    detail::LpOutcome lp = detail::solveInstanceLp(inst, cost);
    if (lp.status == detail::LpStatus::Infeasible)
      throw Error(ErrorKind::Infeasible, "P(A,b) is empty");
    maxima[j] = -lp.value;
  }
  return maxima;
}

}  // namespace igap
