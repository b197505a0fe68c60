#pragma once

// Desk-scale exact integer optimisation over P(A,b): lattice-point
// enumeration, branch-and-bound, vertices of the integer hull, sparsest
// optimal hull vertices and nearest integer points.

#include "igap/polyhedra.hpp"

#include <set>

namespace igap {

struct IntegerSolution {
  IntegerVector z;
  Rational value;
  IndexSet support;
  std::size_t supportSize = 0;
};

inline IntegerSolution makeIntegerSolution(const Instance& inst, IntegerVector z) {
  IntegerSolution s;
  s.value = dot(inst.c, z);
  s.support = supportOf(z);
  s.supportSize = s.support.size();
  s.z = std::move(z);
  return s;
}

inline bool satisfiesIntegerInvariants(const Instance& inst, const IntegerSolution& s) {
  if (s.z.size() != inst.cols()) return false;
  for (const auto& v : s.z)
    if (v < 0) return false;
  if (multiply(inst.A, s.z) != inst.b) return false;
  return s.support == supportOf(s.z) && s.supportSize == s.support.size() &&
         s.value == dot(inst.c, s.z);
}

/// Per-coordinate inclusive integer bounds.
struct EnumerationBox {
  IntegerVector lower;
  IntegerVector upper;
};

struct IntegerOptions {
  /// Cap on enumeration nodes (assignments tried).
  std::uint64_t nodeCap = 10'000'000;
  /// Cap on branch-and-bound LP relaxations per search.
  std::uint64_t branchNodeCap = 200'000;
  /// Compare ilpSolve against the enumeration oracle when it fits the cap.
  bool crossCheck = true;
  PolyhedronOptions polyhedron;
};

struct HullDescription {
  std::vector<IntegerSolution> vertices;
  std::size_t pointsEnumerated = 0;
  bool truncated = false;
};

struct NearestPoint {
  IntegerSolution point;
  Rational distanceSquared;
};

// ---------------------------------------------------------------------------
// Enumeration

/// [0, floor(max x_j)] for each coordinate of a bounded P(A,b).
inline EnumerationBox defaultBox(const Instance& inst) {
  RationalVector maxima = coordinateMaxima(inst);
  EnumerationBox box;
  box.lower.assign(inst.cols(), 0);
  for (const auto& v : maxima) box.upper.push_back(floorOf(v));
  return box;
}

namespace detail {

using Int128 = __int128;

/// Depth-first search over the nonbasic coordinates of a fixed basis; the
/// basic coordinates are recovered by an exact solve at every leaf.
class PointEnumerator {
 public:
  PointEnumerator(const Instance& inst, const EnumerationBox& box, std::uint64_t nodeCap)
      : m_(inst.rows()), n_(inst.cols()), nodeCap_(nodeCap) {
    constexpr long kLimit = 1L << 24;
    auto small = [&](const Integer& v) { return abs(v) <= kLimit; };
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j)
        if (!small(inst.A(i, j))) throw tooLarge();
      if (!small(inst.b[i])) throw tooLarge();
    }
    for (std::size_t j = 0; j < n_; ++j)
      if (!small(box.lower[j]) || !small(box.upper[j])) throw tooLarge();

    a_.assign(m_, std::vector<long>(n_));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a_[i][j] = inst.A(i, j).get_si();
    b_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) b_[i] = inst.b[i].get_si();
    lo_.resize(n_);
    hi_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = std::max(0L, box.lower[j].get_si());
      hi_[j] = box.upper[j].get_si();
    }

    // Basis chosen greedily from the right; the rest are searched in order.
    IndexSet basis;
    for (std::size_t j = n_; j-- > 0 && basis.size() < m_;) {
      IndexSet trial = basis;
      trial.insert(trial.begin(), j);
      if (rank(inst.A.selectColumns(trial)) == trial.size()) basis = std::move(trial);
    }
    basis_ = basis;
    for (std::size_t j = 0; j < n_; ++j)
      if (!std::binary_search(basis_.begin(), basis_.end(), j)) free_.push_back(j);

    IntegerMatrix ab = inst.A.selectColumns(basis_);
    Integer det = determinant(ab);
    if (abs(det) > kLimit) throw tooLarge();
    det_ = det.get_si();
    adj_.assign(m_, std::vector<long>(m_));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        // adj(A_B)_{ij} = (-1)^{i+j} det(A_B without row j, column i)
        std::vector<std::size_t> rows, cols;
        for (std::size_t r = 0; r < m_; ++r)
          if (r != j) rows.push_back(r);
        for (std::size_t c = 0; c < m_; ++c)
          if (c != i) cols.push_back(c);
        Integer minor = determinant(ab.selectRows(rows).selectColumns(cols));
        if (abs(minor) > kLimit) throw tooLarge();
        adj_[i][j] = ((i + j) % 2 == 0 ? 1 : -1) * minor.get_si();
      }

    // Residual ranges still reachable by coordinates from depth k on.
    const std::size_t depth = free_.size();
    remMin_.assign(depth + 1, std::vector<Int128>(m_, 0));
    remMax_.assign(depth + 1, std::vector<Int128>(m_, 0));
    for (std::size_t i = 0; i < m_; ++i) {
      Int128 mn = 0, mx = 0;
      for (std::size_t j : basis_) addRange(a_[i][j], j, mn, mx);
      remMin_[depth][i] = mn;
      remMax_[depth][i] = mx;
      for (std::size_t k = depth; k-- > 0;) {
        addRange(a_[i][free_[k]], free_[k], mn, mx);
        remMin_[k][i] = mn;
        remMax_[k][i] = mx;
      }
    }
  }

  /// Calls visit(point) for every integer point; order is unspecified.
  template <class Visit>
  void run(Visit&& visit) {
    for (std::size_t j = 0; j < n_; ++j)
      if (lo_[j] > hi_[j]) return;
    std::vector<Int128> residual(b_.begin(), b_.end());
    std::vector<long> x(n_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      if (residual[i] < remMin_[0][i] || residual[i] > remMax_[0][i]) return;
    descend(0, residual, x, visit);
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  static Error tooLarge() {
    return Error(ErrorKind::BudgetExceeded, "entries too large for lattice-point enumeration");
  }

  void addRange(long a, std::size_t j, Int128& mn, Int128& mx) const {
    Int128 p = Int128(a) * lo_[j], q = Int128(a) * hi_[j];
    mn += std::min(p, q);
    mx += std::max(p, q);
  }

  static Int128 floorDiv(Int128 a, Int128 b) {
    Int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static Int128 ceilDiv(Int128 a, Int128 b) { return -floorDiv(-a, b); }

  template <class Visit>
  void descend(std::size_t k, std::vector<Int128>& residual, std::vector<long>& x,
               Visit& visit) {
    if (k == free_.size()) {
      leaf(residual, x, visit);
      return;
    }
    const std::size_t j = free_[k];
    Int128 vlo = lo_[j], vhi = hi_[j];
    for (std::size_t i = 0; i < m_ && vlo <= vhi; ++i) {
      const Int128 a = a_[i][j];
      const Int128 lowAfter = remMin_[k + 1][i], highAfter = remMax_[k + 1][i];
      // Need lowAfter <= residual - a v <= highAfter.
      if (a == 0) {
        if (residual[i] < lowAfter || residual[i] > highAfter) return;
      } else if (a > 0) {
        vhi = std::min(vhi, floorDiv(residual[i] - lowAfter, a));
        vlo = std::max(vlo, ceilDiv(residual[i] - highAfter, a));
      } else {
        vhi = std::min(vhi, floorDiv(residual[i] - highAfter, a));
        vlo = std::max(vlo, ceilDiv(residual[i] - lowAfter, a));
      }
    }
    for (Int128 v = vlo; v <= vhi; ++v) {
      if (++nodes_ > nodeCap_)
        throw Error(ErrorKind::BudgetExceeded, "lattice-point enumeration node cap exceeded");
      x[j] = static_cast<long>(v);
      for (std::size_t i = 0; i < m_; ++i) residual[i] -= Int128(a_[i][j]) * v;
      descend(k + 1, residual, x, visit);
      for (std::size_t i = 0; i < m_; ++i) residual[i] += Int128(a_[i][j]) * v;
    }
    x[j] = 0;
  }

  template <class Visit>
  void leaf(const std::vector<Int128>& residual, std::vector<long>& x, Visit& visit) {
    if (++nodes_ > nodeCap_)
      throw Error(ErrorKind::BudgetExceeded, "lattice-point enumeration node cap exceeded");
    for (std::size_t r = 0; r < m_; ++r) {
      Int128 s = 0;
      for (std::size_t t = 0; t < m_; ++t) s += Int128(adj_[r][t]) * residual[t];
      if (s % det_ != 0) return;
      Int128 v = s / det_;
      const std::size_t j = basis_[r];
      if (v < lo_[j] || v > hi_[j]) return;
      x[j] = static_cast<long>(v);
    }
    visit(x);
  }

  std::size_t m_, n_;
  std::uint64_t nodeCap_;
  std::uint64_t nodes_ = 0;
  std::vector<std::vector<long>> a_;
  std::vector<long> b_, lo_, hi_;
  IndexSet basis_, free_;
  long det_ = 1;
  std::vector<std::vector<long>> adj_;
  std::vector<std::vector<Int128>> remMin_, remMax_;
};

inline std::vector<IntegerVector> integerPoints(const Instance& inst, const EnumerationBox& box,
                                                std::uint64_t nodeCap) {
  if (box.lower.size() != inst.cols() || box.upper.size() != inst.cols())
    throw Error(ErrorKind::DimensionMismatch, "box length differs from n");
  std::vector<std::vector<long>> raw;
  PointEnumerator e(inst, box, nodeCap);
  e.run([&](const std::vector<long>& x) { raw.push_back(x); });
  std::sort(raw.begin(), raw.end());
  std::vector<IntegerVector> out;
  out.reserve(raw.size());
  for (const auto& p : raw) {
    IntegerVector z(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) z[j] = p[j];
    out.push_back(std::move(z));
  }
  return out;
}

struct ResolvedBox {
  EnumerationBox box;
  bool truncated = false;
};

inline ResolvedBox resolveBox(const Instance& inst, const std::optional<EnumerationBox>& box) {
  if (!box) return {defaultBox(inst), false};
  ResolvedBox r{*box, false};
  if (!isPolytope(inst)) {
    r.truncated = true;
    return r;
  }
  RationalVector maxima = coordinateMaxima(inst);
  for (std::size_t j = 0; j < inst.cols(); ++j)
    if (box->lower[j] > 0 || box->upper[j] < floorOf(maxima[j])) r.truncated = true;
  return r;
}

}  // namespace detail

/// Every integer point of P(A,b) inside the box, in lexicographic order.
/// Without a box P(A,b) must be bounded.
inline std::vector<IntegerSolution> enumerateIntegerPoints(
    const Instance& inst, const std::optional<EnumerationBox>& box = std::nullopt,
    const IntegerOptions& options = {}) {
  EnumerationBox resolved = box ? *box : defaultBox(inst);
  std::vector<IntegerSolution> out;
  for (auto& z : detail::integerPoints(inst, resolved, options.nodeCap))
    out.push_back(makeIntegerSolution(inst, std::move(z)));
  return out;
}

// ---------------------------------------------------------------------------
// Integer hull vertices

/// z is the midpoint of two distinct members of `points`.
inline bool isMidpointOfPair(const IntegerVector& z, const std::set<IntegerVector>& points) {
  for (const auto& p : points) {
    if (p == z) continue;
    IntegerVector q(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) q[i] = 2 * z[i] - p[i];
    if (points.contains(q)) return true;
  }
  return false;
}

/// Decides which members of a finite point set are vertices of its convex
/// hull. Keeps a growing set W of certified vertices: a point inside conv(W)
/// is not a vertex; otherwise the Farkas direction h separating it from
/// conv(W) either shows it is the (h, lex)-minimiser of the set, hence a
/// vertex, or yields a new vertex to add to W.
class HullOracle {
 public:
  explicit HullOracle(std::vector<IntegerVector> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    if (!points_.empty()) addVertex(points_.front());
  }

  /// `z` must be a member of the point set.
  bool isVertex(const IntegerVector& z) {
    if (knownSet_.contains(z)) return true;
    for (;;) {
      auto h = separate(z);
      if (!h) return false;
      const IntegerVector* best = nullptr;
      Integer bestValue;
      for (const auto& p : points_) {
        Integer v = dot(*h, p);
        if (!best || v < bestValue) {  // points_ is sorted, so ties keep lex-min
          best = &p;
          bestValue = v;
        }
      }
      addVertex(*best);
      if (*best == z) return true;
    }
  }

  std::size_t size() const { return points_.size(); }

 private:
  void addVertex(const IntegerVector& v) {
    if (knownSet_.insert(v).second) known_.push_back(v);
  }

  // Integral h with h·z < h·w for every certified vertex w, or nullopt when
  // z ∈ conv(W).
  std::optional<IntegerVector> separate(const IntegerVector& z) const {
    const std::size_t n = z.size();
    RationalMatrix rows(n + 1, RationalVector(known_.size()));
    RationalVector rhs(n + 1);
    for (std::size_t k = 0; k < known_.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) rows[i][k] = known_[k][i];
      rows[n][k] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] = z[i];
    rhs[n] = 1;
    auto lp = detail::simplex(rows, rhs, RationalVector(known_.size()), true);
    if (lp.status != detail::LpStatus::Infeasible) return std::nullopt;
    Integer scale = 1;
    for (std::size_t i = 0; i < n; ++i) scale = lcmOf(scale, lp.farkas[i].get_den());
    IntegerVector h(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rational v = lp.farkas[i] * scale;
      h[i] = v.get_num();
    }
    return h;
  }

  std::vector<IntegerVector> points_;
  std::vector<IntegerVector> known_;
  std::set<IntegerVector> knownSet_;
};

/// z is a vertex of conv(points), where z is one of the points.
inline bool isHullVertex(const IntegerVector& z, const std::vector<IntegerVector>& points) {
  return HullOracle(points).isVertex(z);
}

inline HullDescription hullVertices(const Instance& inst,
                                    const std::optional<EnumerationBox>& box = std::nullopt,
                                    const IntegerOptions& options = {}) {
  detail::ResolvedBox resolved = detail::resolveBox(inst, box);
  std::vector<IntegerVector> points = detail::integerPoints(inst, resolved.box, options.nodeCap);
  HullDescription hull;
  hull.pointsEnumerated = points.size();
  hull.truncated = resolved.truncated;
  HullOracle oracle(points);
  for (const auto& z : points)
    if (oracle.isVertex(z)) hull.vertices.push_back(makeIntegerSolution(inst, z));
  return hull;
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace detail {

struct BranchResult {
  bool feasible = false;
  IntegerVector z;
  Rational value;
  std::uint64_t nodes = 0;
};

/// min cost·x over {x ∈ Z^n : rows x = rhs, lower <= x <= upper}. The LP
/// relaxation at the root must be bounded. Branches on the fractional
/// coordinate with the largest denominator (smallest index on ties), down
/// branch first.
inline BranchResult branchAndBound(const RationalMatrix& rows, const RationalVector& rhs,
                                   const RationalVector& cost, IntegerVector lower,
                                   std::vector<std::optional<Integer>> upper,
                                   std::uint64_t nodeCap) {
  const std::size_t n = cost.size();
  struct Node {
    IntegerVector lower;
    std::vector<std::optional<Integer>> upper;
  };
  std::vector<Node> stack{{std::move(lower), std::move(upper)}};
  BranchResult best;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (++best.nodes > nodeCap)
      throw Error(ErrorKind::BudgetExceeded, "branch-and-bound node cap exceeded");

    // Shift x = lower + x', add x'_j + s_j = upper_j - lower_j.
    std::vector<std::size_t> bounded;
    bool empty = false;
    for (std::size_t j = 0; j < n; ++j)
      if (node.upper[j]) {
        if (*node.upper[j] < node.lower[j]) empty = true;
        bounded.push_back(j);
      }
    if (empty) continue;
    const std::size_t width = n + bounded.size();
    RationalMatrix a;
    RationalVector b;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      RationalVector row(width);
      Rational r = rhs[i];
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = rows[i][j];
        r -= rows[i][j] * node.lower[j];
      }
      a.push_back(std::move(row));
      b.push_back(r);
    }
    for (std::size_t k = 0; k < bounded.size(); ++k) {
      RationalVector row(width);
      row[bounded[k]] = 1;
      row[n + k] = 1;
      a.push_back(std::move(row));
      b.push_back(Rational(*node.upper[bounded[k]] - node.lower[bounded[k]]));
    }
    RationalVector c(width);
    for (std::size_t j = 0; j < n; ++j) c[j] = cost[j];
    LpOutcome lp = simplex(a, b, c);
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded)
      throw std::logic_error("branch-and-bound relaxation unbounded below a bounded root");
    Rational value = lp.value;
    for (std::size_t j = 0; j < n; ++j) value += cost[j] * node.lower[j];
    if (best.feasible && value >= best.value) continue;

    std::optional<std::size_t> branchVar;
    for (std::size_t j = 0; j < n; ++j) {
      if (isIntegral(lp.x[j])) continue;
      if (!branchVar || lp.x[j].get_den() > lp.x[*branchVar].get_den()) branchVar = j;
    }
    if (!branchVar) {
      best.feasible = true;
      best.value = value;
      best.z.resize(n);
      for (std::size_t j = 0; j < n; ++j) best.z[j] = lp.x[j].get_num() + node.lower[j];
      continue;
    }
    const std::size_t j = *branchVar;
    const Rational xj = lp.x[j] + node.lower[j];
    Node up = node;
    up.lower[j] = ceilOf(xj);
    Node down = std::move(node);
    down.upper[j] = floorOf(xj);
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }
  return best;
}

inline RationalMatrix rowsOf(const Instance& inst) { return toRationalMatrix(inst.A); }

/// Decides P(A,b) ∩ Z^n ≠ ∅ for a possibly unbounded P. Any integer point
/// can be shifted by integer multiples of the integral extreme rays into
/// conv(vertices) + Σ [0,1]·ray, which bounds the search.
inline bool hasIntegerPoint(const Instance& inst, const IntegerOptions& options) {
  IndexSet all(inst.cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  try {
    restrictInstance(inst.A, inst.b, inst.c, all);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InconsistentRestriction) return false;
    throw;
  }
  std::vector<VertexSolution> vertices;
  try {
    vertices = enumerateVertices(inst, options.polyhedron);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) return false;
    throw;
  }
  const std::size_t n = inst.cols();
  RationalVector reach(n, 0);
  for (const auto& v : vertices)
    for (std::size_t j = 0; j < n; ++j) reach[j] = std::max(reach[j], v.x[j]);

  if (!isPolytope(inst)) {
    // Extreme rays are the vertices of {r >= 0 : A r = 0, 1·r = 1}.
    IntegerMatrix cone(inst.rows() + 1, n);
    for (std::size_t i = 0; i < inst.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) cone(i, j) = inst.A(i, j);
    for (std::size_t j = 0; j < n; ++j) cone(inst.rows(), j) = 1;
    IntegerVector rhs(inst.rows() + 1, 0);
    rhs.back() = 1;
    for (const auto& r : enumerateVertices(Instance{cone, rhs, RationalVector(n)},
                                           options.polyhedron)) {
      Integer scale = 1;
      for (const auto& v : r.x) scale = lcmOf(scale, v.get_den());
      for (std::size_t j = 0; j < n; ++j) reach[j] += r.x[j] * scale;
    }
  }
  std::vector<std::optional<Integer>> upper(n);
  for (std::size_t j = 0; j < n; ++j) upper[j] = floorOf(reach[j]);
  return branchAndBound(rowsOf(inst), toRational(inst.b), RationalVector(n), IntegerVector(n, 0),
                        upper, options.branchNodeCap)
      .feasible;
}

}  // namespace detail

/// Optimal integer solution; among optimal points the lexicographically
/// smallest is returned, which is always a vertex of the integer hull.
inline IntegerSolution ilpSolve(const Instance& inst, const IntegerOptions& options = {}) {
  const std::size_t n = inst.cols();
  const RationalMatrix rows = detail::rowsOf(inst);
  const RationalVector rhs = toRational(inst.b);
  auto noUpper = std::vector<std::optional<Integer>>(n);

  detail::LpOutcome root = detail::solveInstanceLp(inst, inst.c);
  if (root.status == detail::LpStatus::Infeasible)
    throw Error(ErrorKind::Infeasible, "P(A,b) is empty");
  if (root.status == detail::LpStatus::Unbounded) {
    if (detail::hasIntegerPoint(inst, options))
      throw Error(ErrorKind::Unbounded, "integer program is unbounded");
    throw Error(ErrorKind::Infeasible, "P(A,b) contains no integer point");
  }

  auto first = detail::branchAndBound(rows, rhs, inst.c, IntegerVector(n, 0), noUpper,
                                      options.branchNodeCap);
  if (!first.feasible) throw Error(ErrorKind::Infeasible, "P(A,b) contains no integer point");

  // Lexicographic refinement inside the optimal face.
  RationalMatrix faceRows = rows;
  RationalVector faceRhs = rhs;
  faceRows.push_back(inst.c);
  faceRhs.push_back(first.value);
  IntegerVector lower(n, 0);
  std::vector<std::optional<Integer>> upper(n);
  IntegerVector z = first.z;
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector unit(n, 0);
    unit[k] = 1;
    auto step = detail::branchAndBound(faceRows, faceRhs, unit, lower, upper,
                                       options.branchNodeCap);
    if (!step.feasible) throw std::logic_error("optimal face lost during refinement");
    z = step.z;
    lower[k] = z[k];
    upper[k] = z[k];
  }
  IntegerSolution sol = makeIntegerSolution(inst, z);

  if (options.crossCheck && isPolytope(inst)) {
    try {
      auto points = detail::integerPoints(inst, defaultBox(inst), options.nodeCap);
      std::vector<IntegerVector> optimal;
      Rational bestValue = dot(inst.c, points.front());
      for (const auto& p : points) bestValue = std::min(bestValue, dot(inst.c, p));
      for (const auto& p : points)
        if (dot(inst.c, p) == bestValue) optimal.push_back(p);
      if (bestValue != sol.value || optimal.front() != sol.z || !isHullVertex(sol.z, optimal))
        throw std::logic_error("branch-and-bound disagrees with the enumeration oracle");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
    }
  }
  return sol;
}

/// Among optimal vertices of the integer hull, one of minimum support
/// (lexicographically smallest on ties). `points` must be all integer
/// points of P(A,b).
inline IntegerSolution minSupportOptimal(const Instance& inst,
                                         const std::vector<IntegerVector>& points) {
  if (points.empty()) throw Error(ErrorKind::Infeasible, "P(A,b) contains no integer point");
  Rational bestValue = dot(inst.c, points.front());
  for (const auto& p : points) bestValue = std::min(bestValue, dot(inst.c, p));
  std::vector<IntegerVector> optimal;
  for (const auto& p : points)
    if (dot(inst.c, p) == bestValue) optimal.push_back(p);
  std::optional<IntegerSolution> best;
  HullOracle oracle(optimal);
  for (const auto& z : optimal) {
    if (!oracle.isVertex(z)) continue;
    IntegerSolution s = makeIntegerSolution(inst, z);
    if (!best || s.supportSize < best->supportSize) best = std::move(s);
  }
  return *best;
}

inline IntegerSolution minSupportOptimal(const Instance& inst, const IntegerOptions& options = {}) {
  return minSupportOptimal(inst, detail::integerPoints(inst, defaultBox(inst), options.nodeCap));
}

// ---------------------------------------------------------------------------
// Nearest integer points

inline Rational squaredDistance(const RationalVector& x, const IntegerVector& z) {
  Rational d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational t = x[i] - z[i];
    d += t * t;
  }
  return d;
}

/// Integer point of P(A,b) closest to x in the Euclidean norm
/// (lexicographically smallest on ties). `points` must be all integer points.
inline NearestPoint nearestIntegerPoint(const Instance& inst, const RationalVector& x,
                                        const std::vector<IntegerVector>& points) {
  if (points.empty()) throw Error(ErrorKind::NoIntegerPoint, "P(A,b) contains no integer point");
  const IntegerVector* best = nullptr;
  Rational bestDist;
  for (const auto& p : points) {
    Rational d = squaredDistance(x, p);
    if (!best || d < bestDist) {
      best = &p;
      bestDist = d;
    }
  }
  return {makeIntegerSolution(inst, *best), bestDist};
}

inline NearestPoint nearestIntegerPoint(const Instance& inst, const VertexSolution& vertex,
                                        const IntegerOptions& options = {}) {
  auto points = detail::integerPoints(inst, defaultBox(inst), options.nodeCap);
  return nearestIntegerPoint(inst, vertex.x, points);
}

/// Integer point minimising the norm of its nonbasic part z_N, N being the
/// complement of the vertex basis (lexicographically smallest on ties).
/// Returns the full Euclidean distance to the vertex.
inline NearestPoint nonbasicClosestIntegerPoint(const Instance& inst, const VertexSolution& vertex,
                                                const std::vector<IntegerVector>& points) {
  if (points.empty()) throw Error(ErrorKind::NoIntegerPoint, "P(A,b) contains no integer point");
  const IntegerVector* best = nullptr;
  Integer bestNorm;
  for (const auto& p : points) {
    Integer norm = 0;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (!std::binary_search(vertex.basis.begin(), vertex.basis.end(), j)) norm += p[j] * p[j];
    if (!best || norm < bestNorm) {
      best = &p;
      bestNorm = norm;
    }
  }
  return {makeIntegerSolution(inst, *best), squaredDistance(vertex.x, *best)};
}

}  // namespace igap
