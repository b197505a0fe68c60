#pragma once

// Integrality gaps and every upper bound on them, evaluated as exact
// expressions r + √X − √Y and compared against the exact gap with outward
// rounding (MPFR intervals, escalating precision, exact fallback).

#include "igap/integer_opt.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdio>

namespace igap {

// ---------------------------------------------------------------------------
// Certified arithmetic on r + √X − √Y

namespace detail {

inline std::optional<Rational> exactSqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    return std::nullopt;
  Integer num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  return makeRational(num, den);
}

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace detail

/// rational + √plusRoot − √minusRoot with nonnegative radicands. Perfect
/// squares and equal radicands are folded into the rational part.
struct BoundExpression {
  Rational rational = 0;
  Rational plusRoot = 0;
  Rational minusRoot = 0;

  static BoundExpression make(Rational r, Rational x = 0, Rational y = 0) {
    if (x < 0 || y < 0) throw Error(ErrorKind::InvalidArgument, "negative radicand");
    if (x == y) x = y = 0;
    if (auto s = detail::exactSqrt(x)) {
      r += *s;
      x = 0;
    }
    if (auto s = detail::exactSqrt(y)) {
      r -= *s;
      y = 0;
    }
    return {r, x, y};
  }

  bool isRational() const { return plusRoot == 0 && minusRoot == 0; }

  /// Decimal approximation for tables only; never used for verdicts.
  double approx() const {
    return rational.get_d() + std::sqrt(plusRoot.get_d()) - std::sqrt(minusRoot.get_d());
  }

  friend bool operator==(const BoundExpression&, const BoundExpression&) = default;
};

/// Lower and upper enclosure of the expression at the given precision.
inline void encloseBound(const BoundExpression& e, mpfr_ptr lo, mpfr_ptr hi) {
  const mpfr_prec_t bits = mpfr_get_prec(lo);
  detail::Mpfr t(bits), u(bits);
  // Lower end: every term rounded down, √Y rounded up before subtracting.
  mpfr_set_q(lo, e.rational.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(t.get(), e.plusRoot.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(t.get(), t.get(), MPFR_RNDD);
  mpfr_add(lo, lo, t.get(), MPFR_RNDD);
  mpfr_set_q(u.get(), e.minusRoot.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(u.get(), u.get(), MPFR_RNDU);
  mpfr_sub(lo, lo, u.get(), MPFR_RNDD);

  mpfr_set_q(hi, e.rational.get_mpq_t(), MPFR_RNDU);
  mpfr_set_q(t.get(), e.plusRoot.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(t.get(), t.get(), MPFR_RNDU);
  mpfr_add(hi, hi, t.get(), MPFR_RNDU);
  mpfr_set_q(u.get(), e.minusRoot.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(u.get(), u.get(), MPFR_RNDD);
  mpfr_sub(hi, hi, u.get(), MPFR_RNDU);
}

/// Exact rationals print as "p/q"; irrational values as ten decimals
/// rounded toward +∞ followed by "↑".
inline std::string formatBound(const BoundExpression& e, mpfr_prec_t bits = 128) {
  if (e.isRational()) return e.rational.get_str();
  detail::Mpfr lo(bits), hi(bits);
  encloseBound(e, lo.get(), hi.get());
  char buf[256];
  mpfr_snprintf(buf, sizeof buf, "%.10RUf", hi.get());
  return std::string(buf) + "↑";
}

/// Exact decision of q <= √X − √Y by squaring with sign bookkeeping.
inline bool atMostRootDifference(const Rational& q, const Rational& x, const Rational& y) {
  if (q <= 0) {
    if (x >= y) return true;
    // Need √Y − √X <= h with h = −q >= 0, i.e. Y − X − h² <= 2h√X.
    const Rational h = -q;
    const Rational u = y - x - h * h;
    if (u <= 0) return true;
    return u * u <= 4 * h * h * x;
  }
  // Need √X >= q + √Y, i.e. X − Y − q² >= 2q√Y.
  const Rational t = x - y - q * q;
  if (t < 0) return false;
  return t * t >= 4 * q * q * y;
}

enum class Verdict { Satisfied, Violated, Indeterminate };

inline const char* toString(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct CertifiedComparison {
  Verdict verdict = Verdict::Indeterminate;
  /// Precision at which the interval separated the two sides (0 if the
  /// exact decision was needed).
  mpfr_prec_t bits = 0;
  bool exactFallback = false;
};

/// Decides value <= bound. Intervals are tried at startBits, doubling up to
/// maxBits; ties that survive are resolved by exact squaring, so the result
/// is Indeterminate only when `allowExact` is false.
inline CertifiedComparison certifyAtMost(const Rational& value, const BoundExpression& bound,
                                         mpfr_prec_t startBits = 128, mpfr_prec_t maxBits = 1024,
                                         bool allowExact = true) {
  CertifiedComparison out;
  if (bound.isRational()) {
    out.verdict = value <= bound.rational ? Verdict::Satisfied : Verdict::Violated;
    return out;
  }
  for (mpfr_prec_t bits = std::max<mpfr_prec_t>(startBits, MPFR_PREC_MIN); bits <= maxBits;
       bits *= 2) {
    detail::Mpfr lo(bits), hi(bits);
    encloseBound(bound, lo.get(), hi.get());
    if (mpfr_cmp_q(lo.get(), value.get_mpq_t()) >= 0) {
      out.verdict = Verdict::Satisfied;
      out.bits = bits;
      return out;
    }
    if (mpfr_cmp_q(hi.get(), value.get_mpq_t()) < 0) {
      out.verdict = Verdict::Violated;
      out.bits = bits;
      return out;
    }
  }
  if (!allowExact) return out;
  out.exactFallback = true;
  out.verdict = atMostRootDifference(value - bound.rational, bound.plusRoot, bound.minusRoot)
                    ? Verdict::Satisfied
                    : Verdict::Violated;
  return out;
}

// ---------------------------------------------------------------------------
// Cost norms and the gap itself

struct CostNorms {
  Rational norm2Squared = 0;
  Rational norm1 = 0;
  Rational normInf = 0;
};

inline CostNorms costNorms(const RationalVector& c) {
  CostNorms n;
  for (const auto& v : c) {
    const Rational a = abs(v);
    n.norm2Squared += v * v;
    n.norm1 += a;
    n.normInf = std::max(n.normInf, a);
  }
  return n;
}

/// IP(A,b,c) − LP(A,b,c); throws Infeasible or Unbounded.
inline Rational integralityGap(const Instance& inst, const IntegerOptions& options = {}) {
  LpResult lp = lpSolve(inst, options.polyhedron);
  if (std::holds_alternative<UnboundedRay>(lp)) {
    // ilpSolve decides between an empty lattice and a genuinely unbounded IP.
    ilpSolve(inst, options);
    throw Error(ErrorKind::Unbounded, "integer program is unbounded");
  }
  return ilpSolve(inst, options).value - std::get<VertexSolution>(lp).value;
}

// ---------------------------------------------------------------------------
// The bounds. Forms derived for unit c are scaled by ‖c‖₂.

namespace detail {

inline Rational ratioSquared(const MatrixInvariants& inv) {
  return makeRational(inv.gramDet, inv.gcdMinors * inv.gcdMinors);
}

/// (s / 2^{s−m−1})², exact for any sign of the exponent.
inline Rational supportFactorSquared(std::size_t s, std::size_t m) {
  const long e = static_cast<long>(m) + 1 - static_cast<long>(s);
  Rational pow4 = 1;
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 4, static_cast<unsigned long>(std::labs(e)));
  pow4 = e >= 0 ? Rational(p) : Rational(Integer(1), p);
  pow4.canonicalize();
  return Rational(static_cast<long>(s) * static_cast<long>(s)) * pow4;
}

inline Integer powInt(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace detail

/// ‖c‖₁ (n−m) Δ_m(A).
inline BoundExpression cookBound(const Instance& inst, const MatrixInvariants& inv) {
  if (!inv.deltaM())
    throw Error(ErrorKind::NotApplicable, "Δ_m was not computed (minor budget exceeded)");
  const long nm = static_cast<long>(inst.cols() - inst.rows());
  return BoundExpression::make(costNorms(inst.c).norm1 * nm * *inv.deltaM());
}

/// ‖c‖∞ m (2mΔ₁(A)+1)^m.
inline BoundExpression ewBound(const Instance& inst, const MatrixInvariants& inv) {
  const unsigned long m = inst.rows();
  const Integer base = Integer(2 * static_cast<long>(m)) * inv.delta1() + 1;
  return BoundExpression::make(costNorms(inst.c).normInf * static_cast<long>(m) *
                               detail::powInt(base, m));
}

/// ‖c‖₂ · s/2^{s−m−1} · Δ(A)/gcd(A) with s = ‖z*‖₀.
inline BoundExpression transferenceBound(const Instance& inst, const MatrixInvariants& inv,
                                         const IntegerSolution& zStar) {
  return BoundExpression::make(0, costNorms(inst.c).norm2Squared *
                                      detail::supportFactorSquared(zStar.supportSize,
                                                                   inst.rows()) *
                                      detail::ratioSquared(inv));
}

/// ‖c‖₂ · s·C(s+m,m)^{1/2}/2^{s−m−1} · Δ_m(A)/gcd(A).
inline BoundExpression transferenceBoundDeltaM(const Instance& inst, const MatrixInvariants& inv,
                                               const IntegerSolution& zStar) {
  if (!inv.deltaM())
    throw Error(ErrorKind::NotApplicable, "Δ_m was not computed (minor budget exceeded)");
  const std::size_t s = zStar.supportSize, m = inst.rows();
  const Integer dm = *inv.deltaM();
  return BoundExpression::make(0, costNorms(inst.c).norm2Squared *
                                      detail::supportFactorSquared(s, m) * binomial(s + m, m) *
                                      makeRational(dm * dm, inv.gcdMinors * inv.gcdMinors));
}

/// ‖c‖₂ · s(s+m)^{m/2}/2^{s−m−1} · Δ₁(A)^m/gcd(A).
inline BoundExpression transferenceBoundDelta1(const Instance& inst, const MatrixInvariants& inv,
                                               const IntegerSolution& zStar) {
  const std::size_t s = zStar.supportSize, m = inst.rows();
  const Integer d1m = detail::powInt(inv.delta1(), m);
  return BoundExpression::make(
      0, costNorms(inst.c).norm2Squared * detail::supportFactorSquared(s, m) *
             detail::powInt(Integer(static_cast<unsigned long>(s + m)), m) *
             makeRational(d1m * d1m, inv.gcdMinors * inv.gcdMinors));
}

/// ‖c‖₂ · (n−m)/∏_{i<n−m}(z_(i)+1) · Δ(A)/gcd(A), the product running over
/// the n−m−1 smallest coordinates of z*. Requires n > m+1.
inline BoundExpression advancedBound(const Instance& inst, const MatrixInvariants& inv,
                                     const IntegerSolution& zStar) {
  const std::size_t n = inst.cols(), m = inst.rows();
  if (n <= m + 1)
    throw Error(ErrorKind::NotApplicable, "needs n > m+1 (here n = m+1)");
  IntegerVector sorted = zStar.z;
  std::sort(sorted.begin(), sorted.end());
  Integer product = 1;
  for (std::size_t i = 0; i + 1 < n - m; ++i) product *= sorted[i] + 1;
  const long nm = static_cast<long>(n - m);
  return BoundExpression::make(0, costNorms(inst.c).norm2Squared *
                                      makeRational(Integer(nm * nm), product * product) *
                                      detail::ratioSquared(inv));
}

/// ‖c‖₂ · (Δ(A)/gcd(A) − 1).
inline BoundExpression proximityGapBound(const Instance& inst, const MatrixInvariants& inv) {
  const Rational c2 = costNorms(inst.c).norm2Squared;
  return BoundExpression::make(0, c2 * detail::ratioSquared(inv), c2);
}

/// Δ(A)/gcd(A) − 1, the distance bound from a vertex to a nearest integer point.
inline BoundExpression proximityDistanceBound(const MatrixInvariants& inv) {
  return BoundExpression::make(-1, detail::ratioSquared(inv));
}

/// Certifies ‖x − z‖₂ <= Δ(A)/gcd(A) − 1 given the exact squared distance.
inline CertifiedComparison certifyProximity(const Rational& distanceSquared,
                                            const MatrixInvariants& inv,
                                            mpfr_prec_t startBits = 128) {
  // √D <= √R − 1  ⇔  1 <= √R − √D.
  BoundExpression diff = BoundExpression::make(0, detail::ratioSquared(inv), distanceSquared);
  return certifyAtMost(1, diff, startBits);
}

// ---------------------------------------------------------------------------
// Regime comparisons between the support bounds and the classical bounds

enum class RegimeKind { DeltaMVersusCook, Delta1VersusEw };

inline const char* toString(RegimeKind k) {
  return k == RegimeKind::DeltaMVersusCook ? "delta_m_vs_cook" : "delta_1_vs_ew";
}

struct RegimeRow {
  RegimeKind kind;
  std::size_t m = 0, s = 0;
  /// Approximate sides of the inequality, for display.
  double lhs = 0, rhs = 0;
  /// Exact verdict.
  bool holds = false;
};

/// Sufficient coefficient inequalities, checked exactly after squaring:
///   s·C(s+m,m)^{1/2}/2^{s−m−1} <= s−m        for s in [4m, 4m+span]
///   s·(s+m)^{m/2}/2^{s−m−1}   <= m(2m)^m     for s in [6m, 6m+span]
/// The first beats ‖c‖₁(n−m)Δ_m since n >= s and ‖c‖₁ >= ‖c‖₂; the second
/// beats m(2mΔ₁+1)^m since (2mΔ₁+1)^m > (2m)^m Δ₁^m.
inline std::vector<RegimeRow> regimeComparisons(std::size_t mMin = 1, std::size_t mMax = 6,
                                                std::size_t span = 40) {
  std::vector<RegimeRow> rows;
  for (std::size_t m = mMin; m <= mMax; ++m) {
    for (std::size_t s = 4 * m; s <= 4 * m + span; ++s) {
      const Integer pow4 = detail::powInt(4, s - m - 1);
      const Integer left = Integer(static_cast<unsigned long>(s * s)) * binomial(s + m, m);
      const Integer right = Integer(static_cast<unsigned long>((s - m) * (s - m))) * pow4;
      RegimeRow r{RegimeKind::DeltaMVersusCook, m, s, 0, 0, left <= right};
      r.lhs = static_cast<double>(s) * std::sqrt(binomial(s + m, m).get_d()) /
              std::ldexp(1.0, static_cast<int>(s - m - 1));
      r.rhs = static_cast<double>(s - m);
      rows.push_back(r);
    }
    for (std::size_t s = 6 * m; s <= 6 * m + span; ++s) {
      const Integer pow4 = detail::powInt(4, s - m - 1);
      const Integer left = Integer(static_cast<unsigned long>(s * s)) *
                           detail::powInt(Integer(static_cast<unsigned long>(s + m)), m);
      const Integer ew = Integer(static_cast<unsigned long>(m)) *
                         detail::powInt(Integer(static_cast<unsigned long>(2 * m)), m);
      RegimeRow r{RegimeKind::Delta1VersusEw, m, s, 0, 0, left <= ew * ew * pow4};
      r.lhs = static_cast<double>(s) * std::pow(static_cast<double>(s + m), m / 2.0) /
              std::ldexp(1.0, static_cast<int>(s - m - 1));
      r.rhs = ew.get_d();
      rows.push_back(r);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Full report

enum class ReportStatus { Ok, Infeasible, Unbounded, BudgetExceeded };

inline const char* toString(ReportStatus s) {
  switch (s) {
    case ReportStatus::Ok: return "ok";
    case ReportStatus::Infeasible: return "infeasible";
    case ReportStatus::Unbounded: return "unbounded";
    case ReportStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

struct BoundEntry {
  std::string name;
  bool applicable = false;
  std::string reason;
  BoundExpression expression;
  std::string valueText;
  CertifiedComparison check;
};

struct ProximityCheck {
  VertexSolution vertex;
  NearestPoint nearest;
  CertifiedComparison check;
};

struct BoundReport {
  ReportStatus status = ReportStatus::Ok;
  std::string statusDetail;
  MatrixInvariants invariants;
  CostNorms norms;
  Rational lpValue, ipValue, gap;
  VertexSolution lpVertex;
  /// Lexicographically smallest optimal point (a vertex of the integer hull).
  IntegerSolution solverZ;
  /// Optimal hull vertex of minimum support, when the points were enumerable.
  std::optional<IntegerSolution> sparsestZ;
  std::size_t integerPointCount = 0;
  /// Nearest integer point to the LP vertex.
  std::optional<NearestPoint> nearest;
  std::vector<BoundEntry> bounds;
  /// Distance bound Δ/gcd − 1 checked at every vertex of P(A,b).
  std::vector<ProximityCheck> proximity;
  BoundExpression proximityBound;

  std::size_t violations() const {
    std::size_t k = 0;
    for (const auto& b : bounds)
      if (b.applicable && b.check.verdict == Verdict::Violated) ++k;
    for (const auto& p : proximity)
      if (p.check.verdict == Verdict::Violated) ++k;
    return k;
  }
  const BoundEntry* find(std::string_view name) const {
    for (const auto& b : bounds)
      if (b.name == name) return &b;
    return nullptr;
  }
};

struct ReportOptions {
  IntegerOptions integer;
  InvariantOptions invariants;
  mpfr_prec_t precisionBits = 128;
  /// Check the distance bound at every vertex, not just the LP optimum.
  bool allVertices = true;
};

namespace detail {

/// Nearest integer point to x using a box derived from a known integer point
/// at squared distance `known`; works for unbounded P.
inline NearestPoint nearestWithin(const Instance& inst, const RationalVector& x,
                                  const IntegerVector& reference, std::uint64_t nodeCap) {
  const Rational known = squaredDistance(x, reference);
  Integer radius;
  mpz_sqrt(radius.get_mpz_t(), ceilOf(known).get_mpz_t());
  radius += 1;
  EnumerationBox box;
  for (const auto& v : x) {
    box.lower.push_back(std::max(Integer(0), Integer(ceilOf(v) - radius)));
    box.upper.push_back(floorOf(v) + radius);
  }
  return nearestIntegerPoint(inst, x, integerPoints(inst, box, nodeCap));
}

}  // namespace detail

inline BoundReport fullReport(const Instance& inst, const ReportOptions& options = {}) {
  BoundReport rep;
  rep.invariants = computeInvariants(inst.A, options.invariants);
  rep.norms = costNorms(inst.c);
  rep.proximityBound = proximityDistanceBound(rep.invariants);
  const mpfr_prec_t bits = options.precisionBits;

  try {
    LpResult lp = lpSolve(inst, options.integer.polyhedron);
    if (std::holds_alternative<UnboundedRay>(lp)) {
      ilpSolve(inst, options.integer);
      rep.status = ReportStatus::Unbounded;
      rep.statusDetail = "integer program is unbounded";
      return rep;
    }
    rep.lpVertex = std::get<VertexSolution>(lp);
    rep.solverZ = ilpSolve(inst, options.integer);
    rep.lpValue = rep.lpVertex.value;
    rep.ipValue = rep.solverZ.value;
    rep.gap = rep.ipValue - rep.lpValue;

    const bool polytope = isPolytope(inst);
    std::vector<IntegerVector> points;
    if (polytope) {
      points = detail::integerPoints(inst, defaultBox(inst), options.integer.nodeCap);
      rep.integerPointCount = points.size();
      rep.sparsestZ = minSupportOptimal(inst, points);
    }
    auto nearestTo = [&](const RationalVector& x) {
      return polytope ? nearestIntegerPoint(inst, x, points)
                      : detail::nearestWithin(inst, x, rep.solverZ.z, options.integer.nodeCap);
    };
    rep.nearest = nearestTo(rep.lpVertex.x);

    std::vector<VertexSolution> vertices;
    if (options.allVertices)
      vertices = enumerateVertices(inst, options.integer.polyhedron);
    else
      vertices.push_back(rep.lpVertex);
    for (auto& v : vertices) {
      ProximityCheck pc{v, nearestTo(v.x), {}};
      pc.check = certifyProximity(pc.nearest.distanceSquared, rep.invariants, bits);
      rep.proximity.push_back(std::move(pc));
    }
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Infeasible: rep.status = ReportStatus::Infeasible; break;
      case ErrorKind::Unbounded: rep.status = ReportStatus::Unbounded; break;
      case ErrorKind::BudgetExceeded: rep.status = ReportStatus::BudgetExceeded; break;
      default: throw;
    }
    rep.statusDetail = e.what();
    rep.proximity.clear();
    return rep;
  }

  auto add = [&](std::string name, auto&& compute) {
    BoundEntry entry;
    entry.name = std::move(name);
    try {
      entry.expression = compute();
      entry.applicable = true;
      entry.valueText = formatBound(entry.expression, bits);
      entry.check = certifyAtMost(rep.gap, entry.expression, bits);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotApplicable) throw;
      entry.reason = e.what();
    }
    rep.bounds.push_back(std::move(entry));
  };
  const auto& inv = rep.invariants;
  add("cook_sensitivity", [&] { return cookBound(inst, inv); });
  add("eisenbrand_weismantel", [&] { return ewBound(inst, inv); });
  auto withZ = [&](const std::string& base, const auto& f) {
    add(base, [&] { return f(rep.solverZ); });
    add(base + "_sparsest", [&]() -> BoundExpression {
      if (!rep.sparsestZ)
        throw Error(ErrorKind::NotApplicable, "P(A,b) is unbounded; sparsest vertex not searched");
      return f(*rep.sparsestZ);
    });
  };
  withZ("support_transference", [&](const IntegerSolution& z) { return transferenceBound(inst, inv, z); });
  withZ("support_transference_delta_m",
        [&](const IntegerSolution& z) { return transferenceBoundDeltaM(inst, inv, z); });
  withZ("support_transference_delta_1",
        [&](const IntegerSolution& z) { return transferenceBoundDelta1(inst, inv, z); });
  withZ("sorted_support", [&](const IntegerSolution& z) { return advancedBound(inst, inv, z); });
  add("proximity_gap", [&] { return proximityGapBound(inst, inv); });
  return rep;
}

}  // namespace igap
