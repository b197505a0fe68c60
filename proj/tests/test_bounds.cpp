#include "igap/bounds.hpp"
#include "igap/generator.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace igap;

namespace {

Instance inst(IntegerMatrix a, IntegerVector b, RationalVector c) {
  return Instance::make(std::move(a), std::move(b), std::move(c));
}

Rational q(long p, long d = 1) { return makeRational(p, d); }

IntegerSolution sol(const Instance& in, IntegerVector z) { return makeIntegerSolution(in, z); }

// Gap by exhaustive search: LP minimum over basic solutions (Cramer's rule),
// IP minimum over an odometer of the coordinate box. Returns nothing when the
// box is too large to scan.
std::optional<Rational> oracleGap(const Instance& in) {
  const std::size_t m = in.rows(), n = in.cols();
  std::optional<Rational> lp;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != static_cast<int>(m)) continue;
    IndexSet cols;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) cols.push_back(j);
    IntegerMatrix ab = in.A.selectColumns(cols);
    const Integer det = determinant(ab);
    if (det == 0) continue;
    Rational value = 0;
    bool nonneg = true;
    for (std::size_t k = 0; k < m; ++k) {
      IntegerMatrix replaced = ab;
      for (std::size_t i = 0; i < m; ++i) replaced(i, k) = in.b[i];
      Rational x(determinant(replaced), det);
      x.canonicalize();
      if (x < 0) nonneg = false;
      value += in.c[cols[k]] * x;
    }
    if (nonneg && (!lp || value < *lp)) lp = value;
  }
  RationalVector maxima = coordinateMaxima(in);
  double boxSize = 1;
  for (const auto& v : maxima) boxSize *= floorOf(v).get_d() + 1;
  if (boxSize > 3e6) return std::nullopt;
  IntegerVector z(n, 0);
  std::optional<Rational> ip;
  for (;;) {
    if (multiply(in.A, z) == in.b) {
      Rational v = dot(in.c, z);
      if (!ip || v < *ip) ip = v;
    }
    std::size_t j = n;
    while (j-- > 0) {
      if (z[j] + 1 <= maxima[j]) {
        ++z[j];
        break;
      }
      z[j] = 0;
    }
    if (j == std::size_t(-1)) break;
  }
  return *ip - *lp;
}

double norm2(const RationalVector& c) {
  double s = 0;
  for (const auto& v : c) s += v.get_d() * v.get_d();
  return std::sqrt(s);
}

}  // namespace

TEST(BoundExpression, FoldsPerfectSquaresAndEqualRadicands) {
  auto e = BoundExpression::make(1, 9, 4);
  EXPECT_TRUE(e.isRational());
  EXPECT_EQ(e.rational, 2);
  auto f = BoundExpression::make(0, q(13), q(13));
  EXPECT_TRUE(f.isRational());
  EXPECT_EQ(f.rational, 0);
  auto g = BoundExpression::make(0, q(9, 4));
  EXPECT_EQ(g.rational, q(3, 2));
  EXPECT_THROW(BoundExpression::make(0, -1), Error);
}

TEST(BoundExpression, FormattingRoundsUp) {
  EXPECT_EQ(formatBound(BoundExpression::make(-1, 13)), "2.6055512755↑");
  EXPECT_EQ(formatBound(BoundExpression::make(0, 52)), "7.2111025510↑");
  EXPECT_EQ(formatBound(BoundExpression::make(q(7, 2))), "7/2");
  // √2 = 1.41421356237..., so the tenth decimal rounds up to 4.
  EXPECT_EQ(formatBound(BoundExpression::make(0, 2)), "1.4142135624↑");
}

TEST(CertifiedComparison, ExactDecisionAgreesWithHighPrecision) {
  std::mt19937_64 rng(11);
  int decided = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    Rational x = q(uniformInt(rng, 0, 60), uniformInt(rng, 1, 6));
    Rational y = q(uniformInt(rng, 0, 60), uniformInt(rng, 1, 6));
    Rational g = q(uniformInt(rng, -40, 40), uniformInt(rng, 1, 6));
    // Oracle: 4096-bit evaluation of √X − √Y − g, trusted away from zero.
    detail::Mpfr sx(4096), sy(4096), d(4096);
    mpfr_set_q(sx.get(), x.get_mpq_t(), MPFR_RNDN);
    mpfr_sqrt(sx.get(), sx.get(), MPFR_RNDN);
    mpfr_set_q(sy.get(), y.get_mpq_t(), MPFR_RNDN);
    mpfr_sqrt(sy.get(), sy.get(), MPFR_RNDN);
    mpfr_sub(d.get(), sx.get(), sy.get(), MPFR_RNDN);
    mpfr_sub_q(d.get(), d.get(), g.get_mpq_t(), MPFR_RNDN);
    if (std::fabs(mpfr_get_d(d.get(), MPFR_RNDN)) < 1e-300) continue;
    ++decided;
    EXPECT_EQ(atMostRootDifference(g, x, y), mpfr_sgn(d.get()) > 0)
        << g.get_str() << " vs sqrt(" << x.get_str() << ")-sqrt(" << y.get_str() << ")";
  }
  EXPECT_GT(decided, 3000);
}

TEST(CertifiedComparison, ExactTiesAreResolved) {
  // 1 <= √4 − √1 holds with equality; written with non-square radicands.
  EXPECT_TRUE(atMostRootDifference(1, 4, 1));
  EXPECT_TRUE(atMostRootDifference(q(3), q(8), q(2)) == false);  // √8−√2 = √2 < 3
  EXPECT_TRUE(atMostRootDifference(0, q(8), q(2)));
  // √18 − √8 = √2 exactly: compare √2 <= √18 − √8 through the interval path.
  auto e = BoundExpression::make(0, 18, 8);
  auto c = certifyAtMost(1, e);
  EXPECT_EQ(c.verdict, Verdict::Satisfied);
  // An unfolded tie √2 − √2 that no interval can separate.
  auto onlyExact = certifyAtMost(q(0), BoundExpression{0, 2, 2}, 128, 1024);
  EXPECT_EQ(onlyExact.verdict, Verdict::Satisfied);
  EXPECT_TRUE(onlyExact.exactFallback);
  auto noExact = certifyAtMost(q(0), BoundExpression{0, 2, 2}, 128, 1024, false);
  EXPECT_EQ(noExact.verdict, Verdict::Indeterminate);
}

TEST(CertifiedComparison, DoublingPrecisionNeverFlipsVerdicts) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    auto e = BoundExpression::make(q(uniformInt(rng, -10, 10), uniformInt(rng, 1, 4)),
                                   q(uniformInt(rng, 0, 200), uniformInt(rng, 1, 4)),
                                   q(uniformInt(rng, 0, 200), uniformInt(rng, 1, 4)));
    Rational v = q(uniformInt(rng, -30, 30), uniformInt(rng, 1, 5));
    auto a = certifyAtMost(v, e, 64);
    auto b = certifyAtMost(v, e, 128);
    auto c = certifyAtMost(v, e, 512);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(b.verdict, c.verdict);
    EXPECT_NE(a.verdict, Verdict::Indeterminate);
  }
}

TEST(IntegralityGap, WorkedExamples) {
  EXPECT_EQ(integralityGap(inst({{2, 3}}, {5}, {1, 0})), 1);
  EXPECT_EQ(integralityGap(inst({{1, 1}}, {2}, {1, 1})), 0);
  EXPECT_EQ(integralityGap(inst({{3, 5, 7}}, {11}, {1, 0, 0})), 2);
  try {
    integralityGap(inst({{1, 1}}, {-1}, {0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
  }
  try {
    integralityGap(inst({{1, -1}}, {0}, {-1, -1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
}

TEST(ClassicalBounds, WorkedExamples) {
  auto a = inst({{2, 3}}, {5}, {1, 0});
  auto ia = computeInvariants(a.A);
  EXPECT_EQ(cookBound(a, ia), BoundExpression::make(3));
  EXPECT_EQ(ewBound(a, ia), BoundExpression::make(7));
  auto zero = a.withCost({0, 0});
  EXPECT_EQ(cookBound(zero, ia).rational, 0);
  EXPECT_EQ(ewBound(zero, ia).rational, 0);

  auto b = inst({{3, 5, 7}}, {11}, {1, 0, 0});
  auto ib = computeInvariants(b.A);
  EXPECT_EQ(cookBound(b, ib), BoundExpression::make(14));
  EXPECT_EQ(ewBound(b, ib), BoundExpression::make(15));
}

TEST(SupportBounds, WorkedExamples) {
  auto a = inst({{2, 3}}, {5}, {1, 0});
  auto ia = computeInvariants(a.A);
  auto z = sol(a, {1, 1});
  // 2·2^0·√13 = √52.
  EXPECT_EQ(transferenceBound(a, ia, z), BoundExpression::make(0, 52));
  EXPECT_NEAR(transferenceBound(a, ia, z).approx(), 2 * std::sqrt(13.0), 1e-12);
  // 2·√3·3 = √108 in both corollary forms.
  EXPECT_EQ(transferenceBoundDeltaM(a, ia, z), BoundExpression::make(0, 108));
  EXPECT_EQ(transferenceBoundDelta1(a, ia, z), BoundExpression::make(0, 108));
  EXPECT_NEAR(transferenceBoundDeltaM(a, ia, z).approx(), 10.392304845, 1e-8);

  auto origin = sol(a, {0, 0});
  EXPECT_EQ(transferenceBound(a, ia, origin).rational, 0);
  EXPECT_TRUE(transferenceBound(a, ia, origin).isRational());
  EXPECT_TRUE(transferenceBoundDeltaM(a, ia, origin).isRational());
  EXPECT_EQ(transferenceBoundDelta1(a, ia, origin).rational, 0);

  auto b = inst({{3, 5, 7}}, {11}, {1, 0, 0});
  auto ib = computeInvariants(b.A);
  EXPECT_EQ(transferenceBound(b, ib, sol(b, {2, 1, 0})), BoundExpression::make(0, 4 * 83));
}

TEST(SortedSupportBound, WorkedExamples) {
  auto b = inst({{3, 5, 7}}, {11}, {1, 0, 0});
  auto ib = computeInvariants(b.A);
  // n−m−1 = 1: only the smallest coordinate (0) enters the product, so the
  // bound is (n−m)·√83 = 2√83.
  auto e = advancedBound(b, ib, sol(b, {2, 1, 0}));
  EXPECT_EQ(e, BoundExpression::make(0, 4 * 83));
  EXPECT_NEAR(e.approx(), 2 * std::sqrt(83.0), 1e-12);

  auto a = inst({{2, 3}}, {5}, {1, 0});
  try {
    advancedBound(a, computeInvariants(a.A), sol(a, {1, 1}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotApplicable);
  }

  // z* = 0 with n−m−1 = 2: product 1, bound (n−m)·Δ/gcd.
  auto c = Instance{IntegerMatrix{{1, 1, 1, 1}}, {0}, {1, 0, 0, 0}};
  auto ic = computeInvariants(c.A);
  EXPECT_EQ(advancedBound(c, ic, sol(c, {0, 0, 0, 0})), BoundExpression::make(0, 9 * 4));

  // Product over larger coordinates shrinks the bound.
  auto d = Instance{IntegerMatrix{{1, 1, 1, 1}}, {9}, {1, 0, 0, 0}};
  EXPECT_EQ(advancedBound(d, ic, sol(d, {2, 3, 4, 0})),
            BoundExpression::make(2));  // 3/((0+1)(2+1)) · √4
}

TEST(ProximityGapBound, WorkedExamples) {
  auto a = inst({{2, 3}}, {5}, {1, 0});
  auto e = proximityGapBound(a, computeInvariants(a.A));
  EXPECT_EQ(e, BoundExpression::make(-1, 13));
  EXPECT_NEAR(e.approx(), std::sqrt(13.0) - 1, 1e-12);

  auto uni = inst({{1, 0, 0}, {0, 1, 0}}, {2, 3}, {1, 2, -1});
  auto e2 = proximityGapBound(uni, computeInvariants(uni.A));
  ASSERT_TRUE(e2.isRational());
  EXPECT_EQ(e2.rational, 0);

  auto zero = a.withCost({0, 0});
  EXPECT_EQ(proximityGapBound(zero, computeInvariants(a.A)).rational, 0);
}

TEST(Regime, WorkedExamplesAndGrid) {
  auto rows = regimeComparisons(1, 6, 40);
  auto find = [&](RegimeKind k, std::size_t s, std::size_t m) {
    for (const auto& r : rows)
      if (r.kind == k && r.s == s && r.m == m) return r;
    ADD_FAILURE() << "row missing";
    return RegimeRow{};
  };
  auto r41 = find(RegimeKind::DeltaMVersusCook, 4, 1);
  EXPECT_NEAR(r41.lhs, std::sqrt(5.0), 1e-12);
  EXPECT_EQ(r41.rhs, 3);
  EXPECT_TRUE(r41.holds);
  auto r82 = find(RegimeKind::DeltaMVersusCook, 8, 2);
  EXPECT_NEAR(r82.lhs, 8 * std::sqrt(45.0) / 32, 1e-12);
  EXPECT_TRUE(r82.holds);
  EXPECT_EQ(rows.size(), 2u * 6u * 41u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.holds) << toString(r.kind) << " m=" << r.m << " s=" << r.s;
    EXPECT_EQ(r.holds, r.lhs <= r.rhs * (1 + 1e-12));
  }
  // Below the threshold (s=3, m=1) the squared inequality fails: 36 > 16.
  const Integer left = Integer(3 * 3) * binomial(4, 1);
  EXPECT_GT(left, Integer(2 * 2) * detail::powInt(4, 1));
}

TEST(FullReport, SingleConstraintExample) {
  auto rep = fullReport(inst({{2, 3}}, {5}, {1, 0}));
  ASSERT_EQ(rep.status, ReportStatus::Ok);
  EXPECT_EQ(rep.gap, 1);
  EXPECT_EQ(rep.lpValue, 0);
  EXPECT_EQ(rep.ipValue, 1);
  EXPECT_EQ(rep.solverZ.z, (IntegerVector{1, 1}));
  ASSERT_TRUE(rep.sparsestZ);
  EXPECT_EQ(rep.sparsestZ->z, (IntegerVector{1, 1}));
  EXPECT_EQ(rep.find("cook_sensitivity")->valueText, "3");
  EXPECT_EQ(rep.find("eisenbrand_weismantel")->valueText, "7");
  EXPECT_EQ(rep.find("support_transference")->valueText, "7.2111025510↑");
  EXPECT_EQ(rep.find("support_transference_delta_m")->valueText, "10.3923048455↑");
  EXPECT_EQ(rep.find("proximity_gap")->valueText, "2.6055512755↑");
  EXPECT_FALSE(rep.find("sorted_support")->applicable);
  for (const auto& b : rep.bounds)
    if (b.applicable) {
      EXPECT_EQ(b.check.verdict, Verdict::Satisfied) << b.name;
    }
  ASSERT_TRUE(rep.nearest);
  EXPECT_EQ(rep.nearest->distanceSquared, q(13, 9));
  EXPECT_EQ(rep.violations(), 0u);
  // Vertices (5/2,0) and (0,5/3); the first is at distance² 1/4 + 1 from (1,1).
  ASSERT_EQ(rep.proximity.size(), 2u);
  EXPECT_EQ(rep.proximity[0].nearest.distanceSquared, q(13, 4));
}

TEST(FullReport, ThreeColumnExample) {
  auto rep = fullReport(inst({{3, 5, 7}}, {11}, {1, 0, 0}));
  ASSERT_EQ(rep.status, ReportStatus::Ok);
  EXPECT_EQ(rep.gap, 2);
  const auto* thm3 = rep.find("sorted_support");
  ASSERT_TRUE(thm3->applicable);
  EXPECT_NEAR(thm3->expression.approx(), 2 * std::sqrt(83.0), 1e-9);
  EXPECT_EQ(thm3->check.verdict, Verdict::Satisfied);
  EXPECT_EQ(rep.violations(), 0u);
}

TEST(FullReport, StatusesWithoutBounds) {
  auto inf = fullReport(inst({{1, 1}}, {-1}, {0, 0}));
  EXPECT_EQ(inf.status, ReportStatus::Infeasible);
  EXPECT_TRUE(inf.bounds.empty());
  auto lattice = fullReport(inst({{2, 2}}, {1}, {0, 0}));
  EXPECT_EQ(lattice.status, ReportStatus::Infeasible);
  auto unb = fullReport(inst({{1, -1}}, {0}, {-1, -1}));
  EXPECT_EQ(unb.status, ReportStatus::Unbounded);
  EXPECT_TRUE(unb.bounds.empty());
  ReportOptions tight;
  tight.integer.nodeCap = 3;
  tight.integer.crossCheck = false;
  auto budget = fullReport(inst({{1, 1, 1}}, {6}, {1, 2, 0}), tight);
  EXPECT_EQ(budget.status, ReportStatus::BudgetExceeded);
}

TEST(FullReport, UnboundedPolyhedronWithBoundedObjective) {
  // P is a ray but c is bounded below on it; the nearest point search uses
  // a box derived from the optimum.
  auto in = inst({{1, -1}}, {0}, {1, 1});
  auto rep = fullReport(in);
  ASSERT_EQ(rep.status, ReportStatus::Ok);
  EXPECT_EQ(rep.gap, 0);
  EXPECT_FALSE(rep.sparsestZ);
  EXPECT_FALSE(rep.find("support_transference_sparsest")->applicable);
  EXPECT_EQ(rep.nearest->distanceSquared, 0);
}

// Homogeneity of the gap in c for positive rational scalings.
TEST(BoundsProperties, Homogeneity) {
  FamilyParameters family;
  family.nOffsetMax = 3;
  for (std::size_t i = 0; i < 40; ++i) {
    auto g = generateInstance(21, i, family);
    const Rational base = integralityGap(g.instance);
    for (Rational t : {q(1, 3), q(2), q(7, 2)}) {
      RationalVector c = g.instance.c;
      for (auto& v : c) v *= t;
      EXPECT_EQ(integralityGap(g.instance.withCost(c)), t * base);
    }
  }
}

// A cost in the row space of A is constant on P, so the gap vanishes.
TEST(BoundsProperties, RowSpaceCostHasZeroGap) {
  FamilyParameters family;
  family.nOffsetMax = 3;
  std::mt19937_64 rng(8);
  for (std::size_t i = 0; i < 40; ++i) {
    auto g = generateInstance(31, i, family);
    RationalVector c(g.instance.cols(), 0);
    for (std::size_t r = 0; r < g.instance.rows(); ++r) {
      Rational y = q(uniformInt(rng, -4, 4), uniformInt(rng, 1, 3));
      for (std::size_t j = 0; j < c.size(); ++j) c[j] += y * g.instance.A(r, j);
    }
    EXPECT_EQ(integralityGap(g.instance.withCost(c)), 0);
  }
}

// Gap agrees with the exhaustive oracle; every applicable bound holds and
// its decimal evaluation matches a direct floating-point formula.
TEST(BoundsProperties, RandomSuiteCertified) {
  FamilyParameters family;
  family.nOffsetMax = 4;
  int compared = 0;
  for (std::size_t i = 0; i < 120; ++i) {
    auto g = generateInstance(41, i, family);
    const Instance& in = g.instance;
    auto rep = fullReport(in);
    ASSERT_EQ(rep.status, ReportStatus::Ok) << g.name;
    if (auto gap = oracleGap(in)) {
      ++compared;
      EXPECT_EQ(rep.gap, *gap) << g.name;
    }
    EXPECT_GE(rep.gap, 0);
    EXPECT_EQ(rep.violations(), 0u) << g.name;

    const double m = static_cast<double>(in.rows()), n = static_cast<double>(in.cols());
    const double ratio = std::sqrt(rep.invariants.gramDet.get_d()) / rep.invariants.gcdMinors.get_d();
    const double c2 = norm2(in.c);
    const double s = static_cast<double>(rep.solverZ.supportSize);
    const double thm1 = c2 * s / std::pow(2.0, s - m - 1) * ratio;
    EXPECT_NEAR(rep.find("support_transference")->expression.approx(), thm1, 1e-9 * (1 + thm1));
    const double cor2 = c2 * (ratio - 1);
    EXPECT_NEAR(rep.find("proximity_gap")->expression.approx(), cor2, 1e-9 * (1 + cor2));
    const double d1 = rep.invariants.delta1().get_d();
    const double cor1 = c2 * s * std::pow(s + m, m / 2) / std::pow(2.0, s - m - 1) *
                        std::pow(d1, m) / rep.invariants.gcdMinors.get_d();
    EXPECT_NEAR(rep.find("support_transference_delta_1")->expression.approx(), cor1,
                1e-9 * (1 + cor1));
    const auto* thm3 = rep.find("sorted_support");
    EXPECT_EQ(thm3->applicable, n > m + 1);
    for (const auto& p : rep.proximity) EXPECT_EQ(p.check.verdict, Verdict::Satisfied);
    // The sparsest optimal vertex never has larger support than the solver's.
    ASSERT_TRUE(rep.sparsestZ);
    EXPECT_LE(rep.sparsestZ->supportSize, rep.solverZ.supportSize);
    EXPECT_EQ(rep.sparsestZ->value, rep.solverZ.value);
  }
  EXPECT_GT(compared, 90);
}
