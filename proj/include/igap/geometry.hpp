#pragma once

// Convex geometry behind the transference and proximity proofs: volumes of
// linear images of subspace sections, Monte-Carlo slice volumes, the bodies
// D(u,v), E(u,v), K and the bi-pyramid L, and an exhaustive search for
// nonzero lattice points in origin-symmetric bodies.
//
// This is the only floating-point module. Membership of rational points is
// decided exactly; volumes are estimated and compared one-sidedly.

#include "igap/generator.hpp"
#include "igap/integer_opt.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <thread>

namespace igap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Frames

/// Orthonormal basis (as columns) of the span of the given columns. Modified
/// Gram–Schmidt with one re-orthogonalisation pass; columns whose residual
/// falls below `dropTolerance` times their norm are dropped.
inline Mat orthonormalFrame(const Mat& spanning, double dropTolerance = 1e-10) {
  std::vector<Vec> kept;
  for (Eigen::Index j = 0; j < spanning.cols(); ++j) {
    Vec v = spanning.col(j);
    const double original = v.norm();
    if (original == 0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) v -= q.dot(v) * q;
    if (v.norm() <= dropTolerance * original) continue;
    kept.push_back(v / v.norm());
  }
  Mat out(spanning.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

inline Vec toVec(const RationalVector& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].get_d();
  return out;
}

inline Vec toVec(const IntegerVector& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].get_d();
  return out;
}

/// Orthonormal frame of ker(B) for an integer matrix B (any rank).
inline Mat kernelFrame(const IntegerMatrix& b) {
  LatticeBasis k = integerKernel(b);
  Mat spanning(static_cast<Eigen::Index>(b.cols()), static_cast<Eigen::Index>(k.rank()));
  for (std::size_t j = 0; j < k.rank(); ++j)
    spanning.col(static_cast<Eigen::Index>(j)) = toVec(k.vectors[j]);
  return orthonormalFrame(spanning);
}

/// Rows form an orthonormal basis of the orthogonal complement of the
/// column span of `frame`.
inline Mat complementRows(const Mat& frame) {
  const Eigen::Index l = frame.rows(), d = frame.cols();
  Eigen::HouseholderQR<Mat> qr(frame);
  Mat q = qr.householderQ() * Mat::Identity(l, l);
  return q.rightCols(l - d).transpose();
}

// ---------------------------------------------------------------------------
// Subspace sections and linear images

/// A parallelepiped M inside an (l−k)-dimensional subspace S of R^l.
struct SubspaceSection {
  /// l × (l−k), orthonormal columns spanning S.
  Mat basis;
  /// (l−k) × (l−k); column j is the j-th edge of M in S-coordinates.
  Mat generators;

  std::size_t ambientDim() const { return static_cast<std::size_t>(basis.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
  std::size_t codim() const { return ambientDim() - dim(); }
  /// Edges of M in ambient coordinates.
  Mat ambientGenerators() const { return basis * generators; }

  void validate(double tol = 1e-12) const {
    if (generators.rows() != basis.cols() || generators.cols() != basis.cols())
      throw Error(ErrorKind::DimensionMismatch, "generator block must be square in S-coordinates");
    const Mat gram = basis.transpose() * basis;
    if ((gram - Mat::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff() > tol)
      throw Error(ErrorKind::InvalidArgument, "subspace basis is not orthonormal");
    // Generators are expressed in S-coordinates, so they lie in S by
    // construction; the residual check guards the ambient round-trip.
    const Mat g = ambientGenerators();
    const Mat residual = g - basis * (basis.transpose() * g);
    if (residual.size() > 0 && residual.cwiseAbs().maxCoeff() > tol * (1 + g.cwiseAbs().maxCoeff()))
      throw Error(ErrorKind::InvalidArgument, "generators leave the subspace");
  }

  /// vol_{l−k}(M) from the Gram determinant of its ambient edges.
  double volume() const {
    const Mat g = ambientGenerators();
    return std::sqrt(std::max(0.0, (g.transpose() * g).determinant()));
  }
};

/// Volume of D·M by the closed form |det D| √(det(BBᵀ)/det(BDDᵀBᵀ)) vol(M),
/// where the rows of B span (DS)^⊥.
inline double sectionVolumeTransform(const SubspaceSection& section, const Mat& d, const Mat& b) {
  section.validate();
  const Eigen::Index l = static_cast<Eigen::Index>(section.ambientDim());
  if (d.rows() != l || d.cols() != l) throw Error(ErrorKind::DimensionMismatch, "D must be l × l");
  const double detD = d.determinant();
  if (std::fabs(detD) <= 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::SingularMatrix, "D is singular");
  const Eigen::Index k = static_cast<Eigen::Index>(section.codim());
  if (b.cols() != l || b.rows() != k)
    throw Error(ErrorKind::BadOrthogonalComplement, "B must be k × l with k = codim S");
  if (k == 0) return std::fabs(detD) * section.volume();
  const Mat ds = d * section.basis;
  const double scale = b.cwiseAbs().maxCoeff() * std::max(1.0, ds.cwiseAbs().maxCoeff());
  if (scale == 0 || (b * ds).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw Error(ErrorKind::BadOrthogonalComplement, "rows of B are not orthogonal to D·S");
  const double bb = (b * b.transpose()).determinant();
  if (bb <= 1e-24 * std::pow(b.cwiseAbs().maxCoeff(), 2 * static_cast<double>(k)))
    throw Error(ErrorKind::BadOrthogonalComplement, "B does not have full row rank");
  const double bddb = (b * d * d.transpose() * b.transpose()).determinant();
  return std::fabs(detD) * std::sqrt(bb / bddb) * section.volume();
}

/// Same, with B computed as an orthonormal basis of (DS)^⊥.
inline double sectionVolumeTransform(const SubspaceSection& section, const Mat& d) {
  const Eigen::Index l = static_cast<Eigen::Index>(section.ambientDim());
  if (d.rows() != l || d.cols() != l) throw Error(ErrorKind::DimensionMismatch, "D must be l × l");
  if (std::fabs(d.determinant()) <= 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::SingularMatrix, "D is singular");
  return sectionVolumeTransform(section, d, complementRows(d * section.basis));
}

struct EigenvalueBound {
  double bound = 0;
  double actual = 0;
  /// actual >= bound·(1 − 1e−9).
  bool holds = false;
};

/// vol(DM) >= (∏ √λ_i) vol(M) over the l−k smallest eigenvalues of DᵀD.
inline EigenvalueBound eigenvalueVolumeLowerBound(const SubspaceSection& section, const Mat& d) {
  EigenvalueBound out;
  out.actual = sectionVolumeTransform(section, d);
  Eigen::SelfAdjointEigenSolver<Mat> eig(d.transpose() * d, Eigen::EigenvaluesOnly);
  const Vec lambda = eig.eigenvalues();  // ascending
  double product = 1;
  for (std::size_t i = 0; i < section.dim(); ++i)
    product *= std::sqrt(std::max(0.0, lambda[static_cast<Eigen::Index>(i)]));
  out.bound = product * section.volume();
  out.holds = out.actual >= out.bound * (1 - 1e-9);
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo volumes

struct MonteCarloOptions {
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  /// Independent streams; the estimate depends on (seed, shards) only.
  unsigned shards = 4;
};

struct MonteCarloEstimate {
  double estimate = 0;
  /// Standard error of the estimate.
  double sigma = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

namespace detail {

inline double unitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Hit-or-miss estimate of the volume of {t : member(frame·t)} inside the box
/// |t_j| <= halfWidths_j. Shards run on separate threads with streams derived
/// from (seed, shard index).
inline MonteCarloEstimate estimateVolume(const std::function<bool(const Vec&)>& member,
                                         const Mat& frame, const Vec& halfWidths,
                                         const MonteCarloOptions& options) {
  MonteCarloEstimate out;
  out.samples = options.samples;
  if (options.samples == 0) return out;
  const unsigned shards = std::max(1u, options.shards);
  std::vector<std::uint64_t> hits(shards, 0);
  auto work = [&](unsigned s) {
    std::mt19937_64 rng(mixSeed(options.seed ^ mixSeed(0x5eed0000ULL + s)));
    const std::uint64_t count = options.samples / shards + (s < options.samples % shards ? 1 : 0);
    Vec t(frame.cols());
    for (std::uint64_t i = 0; i < count; ++i) {
      for (Eigen::Index j = 0; j < t.size(); ++j)
        t[j] = (2 * detail::unitUniform(rng) - 1) * halfWidths[j];
      if (member(frame * t)) ++hits[s];
    }
  };
  std::vector<std::thread> threads;
  for (unsigned s = 1; s < shards; ++s) threads.emplace_back(work, s);
  work(0);
  for (auto& th : threads) th.join();
  for (auto h : hits) out.hits += h;
  double boxVolume = 1;
  for (Eigen::Index j = 0; j < halfWidths.size(); ++j) boxVolume *= 2 * halfWidths[j];
  const double p = static_cast<double>(out.hits) / static_cast<double>(out.samples);
  out.estimate = boxVolume * p;
  out.sigma = boxVolume * std::sqrt(p * (1 - p) / static_cast<double>(out.samples));
  return out;
}

/// Frame coordinates are bounded by Σ_i |F_ij| r_i when |x_i| < r_i.
inline Vec frameHalfWidths(const Mat& frame, const Vec& coordinateRadii) {
  Vec h(frame.cols());
  for (Eigen::Index j = 0; j < frame.cols(); ++j)
    h[j] = frame.col(j).cwiseAbs().dot(coordinateRadii);
  return h;
}

struct SliceBound {
  double bound = 0;
  MonteCarloEstimate estimate;
  /// Exact volume when cheaply available (full-dimensional or 1-dimensional).
  std::optional<double> exact;
  /// estimate >= bound − 3σ (or exact >= bound when MC was skipped).
  bool holds = false;
};

/// vol_{l−k}(D(S ∩ (−1,1)^l)) >= 2^{l−k} ∏_{i<=l−k} d_i for D = diag(d).
/// `subspace` is l × (l−k) with columns spanning S.
inline SliceBound boxSliceLowerBound(const std::vector<double>& d, const Mat& subspace,
                                     const MonteCarloOptions& options = {}) {
  const std::size_t l = d.size();
  if (static_cast<std::size_t>(subspace.rows()) != l)
    throw Error(ErrorKind::DimensionMismatch, "subspace vectors must have length l");
  for (std::size_t i = 0; i < l; ++i)
    if (!(d[i] > 0) || (i > 0 && d[i] < d[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "d must be positive and ascending");
  const Mat frameS = orthonormalFrame(subspace);
  if (frameS.cols() != subspace.cols())
    throw Error(ErrorKind::DimensionMismatch, "subspace spanning vectors are dependent");
  const std::size_t dim = static_cast<std::size_t>(frameS.cols());

  SliceBound out;
  out.bound = std::ldexp(1.0, static_cast<int>(dim));
  for (std::size_t i = 0; i < dim; ++i) out.bound *= d[i];

  Vec dv(static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < l; ++i) dv[static_cast<Eigen::Index>(i)] = d[i];
  // D(S ∩ cube) = (DS) ∩ box(d); sample in an orthonormal frame of DS.
  const Mat frame = orthonormalFrame(dv.asDiagonal() * frameS);
  if (dim == l) {
    double v = 1;
    for (double x : d) v *= 2 * x;
    out.exact = v;
  } else if (dim == 1) {
    // Segment through the origin along a unit vector f: |t f_i| < d_i.
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < l; ++i) {
      const double f = std::fabs(frame(static_cast<Eigen::Index>(i), 0));
      if (f > 0) t = std::min(t, d[i] / f);
    }
    out.exact = 2 * t;
  }
  auto member = [&](const Vec& x) {
    for (std::size_t i = 0; i < l; ++i)
      if (!(std::fabs(x[static_cast<Eigen::Index>(i)]) < d[i])) return false;
    return true;
  };
  out.estimate = estimateVolume(member, frame, frameHalfWidths(frame, dv), options);
  if (options.samples > 0)
    out.holds = out.estimate.estimate >= out.bound - 3 * out.estimate.sigma;
  else
    out.holds = out.exact && *out.exact >= out.bound * (1 - 1e-12);
  return out;
}

// ---------------------------------------------------------------------------
// Cube-segment bodies

namespace detail {

/// ∃λ ∈ [lo, hi] with ‖p − base − λ·dir‖∞ < 1, decided by intersecting the
/// per-coordinate open λ-intervals with the closed range [lo, hi].
template <class T>
bool cubeSweepContains(const std::vector<T>& p, const std::vector<T>& base,
                       const std::vector<T>& dir, const T& lo, const T& hi) {
  T lower = lo, upper = hi;
  bool lowerOpen = false, upperOpen = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const T r = p[i] - base[i];
    if (dir[i] == 0) {
      if (!(r < 1 && r > -1)) return false;
      continue;
    }
    // r − 1 < λ·dir < r + 1.
    T a = (r - 1) / dir[i], b = (r + 1) / dir[i];
    if (a > b) std::swap(a, b);
    if (a > lower || (a == lower && !lowerOpen)) {
      lower = a;
      lowerOpen = true;
    }
    if (b < upper || (b == upper && !upperOpen)) {
      upper = b;
      upperOpen = true;
    }
  }
  if (lowerOpen || upperOpen) return lower < upper;
  return lower <= upper;
}

inline std::vector<double> toStd(const Vec& v) { return {v.data(), v.data() + v.size()}; }

inline std::vector<double> toStd(const RationalVector& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

}  // namespace detail

/// D(u,v) = conv(Cⁿ(u), Cⁿ(v)) with Cⁿ(y) the open cube of half-width 1.
inline bool inHullBody(const RationalVector& p, const RationalVector& u, const RationalVector& v) {
  RationalVector dir(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) dir[i] = u[i] - v[i];
  return detail::cubeSweepContains<Rational>(p, v, dir, Rational(0), Rational(1));
}

/// E(u,v) = conv(Cⁿ(u−v), Cⁿ(v−u)).
inline bool inUnionHullBody(const RationalVector& p, const RationalVector& u,
                            const RationalVector& v) {
  RationalVector w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] - v[i];
  return detail::cubeSweepContains<Rational>(p, RationalVector(p.size(), 0), w, Rational(-1),
                                             Rational(1));
}

struct NonnegativityResult {
  std::vector<IntegerVector> members;
  /// Members with a negative coordinate (always empty when the nonnegativity property holds).
  std::vector<IntegerVector> negativeMembers;
  bool holds() const { return negativeMembers.empty(); }
};

/// Integer points of the box lying in D(u,v); for u, v >= 0 none of them may
/// have a negative coordinate.
inline NonnegativityResult nonnegativityOfD(const RationalVector& u, const RationalVector& v,
                                            const EnumerationBox& box,
                                            std::uint64_t pointCap = 10'000'000) {
  const std::size_t n = u.size();
  if (v.size() != n || box.lower.size() != n || box.upper.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "u, v and the box must share a dimension");
  for (std::size_t i = 0; i < n; ++i)
    if (u[i] < 0 || v[i] < 0) throw Error(ErrorKind::InvalidArgument, "u and v must be nonnegative");
  Integer total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (box.upper[i] < box.lower[i]) return {};
    total *= box.upper[i] - box.lower[i] + 1;
  }
  if (total > Integer(static_cast<unsigned long>(pointCap)))
    throw Error(ErrorKind::BudgetExceeded, "box has " + total.get_str() + " points");
  NonnegativityResult out;
  IntegerVector z = box.lower;
  for (;;) {
    if (inHullBody(toRational(z), u, v)) {
      out.members.push_back(z);
      if (std::any_of(z.begin(), z.end(), [](const Integer& x) { return x < 0; }))
        out.negativeMembers.push_back(z);
    }
    std::size_t j = n;
    while (j-- > 0) {
      if (z[j] < box.upper[j]) {
        ++z[j];
        break;
      }
      z[j] = box.lower[j];
    }
    if (j == std::size_t(-1)) break;
  }
  return out;
}

/// vol_{n−m}(E(u,v) ∩ ker A) >= 2^{n−m}(1 + ‖u−v‖₂) for u, v ∈ P(A,b).
inline SliceBound eBodySliceBound(const IntegerMatrix& a, const RationalVector& u,
                                  const RationalVector& v, const MonteCarloOptions& options = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m >= n) throw Error(ErrorKind::DegenerateKernel, "ker(A) is trivial when m >= n");
  if (u.size() != n || v.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "u and v must have length n");
  RationalVector w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] < 0 || v[i] < 0) throw Error(ErrorKind::InvalidArgument, "u and v must be nonnegative");
    w[i] = u[i] - v[i];
  }
  if (multiply(a, w) != RationalVector(m, 0))
    throw Error(ErrorKind::InvalidArgument, "Au and Av differ");
  const Mat kernel = kernelFrame(a);
  if (kernel.cols() == 0) throw Error(ErrorKind::DegenerateKernel, "ker(A) is trivial");
  const std::size_t dim = static_cast<std::size_t>(kernel.cols());

  const Vec wd = toVec(w);
  SliceBound out;
  out.bound = std::ldexp(1.0, static_cast<int>(dim)) * (1 + wd.norm());
  const std::vector<double> ws = detail::toStd(wd), zero(n, 0.0);
  auto member = [&](const Vec& x) {
    return detail::cubeSweepContains<double>(detail::toStd(x), zero, ws, -1.0, 1.0);
  };
  // w lies in ker(A); putting it first in the frame gives a tight sampling
  // box. A point λw + e has coordinate λ‖w‖ + ŵ·e along ŵ and f·e along any
  // unit f ⊥ w, with ‖e‖∞ < 1.
  Mat spanning(kernel.rows(), kernel.cols() + 1);
  spanning << wd, kernel;
  const Mat frame = orthonormalFrame(spanning);
  Vec half(frame.cols());
  for (Eigen::Index j = 0; j < frame.cols(); ++j) half[j] = frame.col(j).lpNorm<1>();
  if (wd.norm() > 0) half[0] += wd.norm();
  if (dim == 1) {
    // Convex and symmetric along one direction: bisect for the extent.
    double lo = 0, hi = half[0];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (member(frame.col(0) * mid) ? lo : hi) = mid;
    }
    out.exact = 2 * lo;
  }
  out.estimate = estimateVolume(member, frame, half, options);
  if (options.samples > 0)
    out.holds = out.estimate.estimate >= out.bound - 3 * out.estimate.sigma;
  else
    out.holds = out.exact && *out.exact >= out.bound * (1 - 1e-12);
  return out;
}

// ---------------------------------------------------------------------------
// Origin-symmetric bodies and lattice-point search

enum class BodyKind { CubeSection, Bipyramid, UnionHull, Hull, Ball, Segment };

inline const char* toString(BodyKind k) {
  switch (k) {
    case BodyKind::CubeSection: return "cube-section";
    case BodyKind::Bipyramid: return "bipyramid";
    case BodyKind::UnionHull: return "union-hull";
    case BodyKind::Hull: return "hull";
    case BodyKind::Ball: return "ball";
    case BodyKind::Segment: return "segment";
  }
  return "unknown";
}

/// Bodies used by the lattice-point arguments. All are given by rational data
/// so membership of lattice points is exact.
///   CubeSection  K = ker(constraints) ∩ Π(−d_i, d_i)
///   Bipyramid    L = conv(±apex, K) with K = ker([constraints; cost]) ∩ Π(−d_i, d_i)
///   UnionHull    E = conv(Cⁿ(apex), Cⁿ(−apex))
///   Hull         D = conv(Cⁿ(apex), Cⁿ(second)), not origin-symmetric
///   Ball         open ball of squared radius radiusSquared
///   Segment      {t·apex : ‖t·apex‖² < radiusSquared}
struct SymmetricBody {
  BodyKind kind = BodyKind::Ball;
  std::size_t dim = 0;
  IntegerMatrix constraints;
  RationalVector cost;
  RationalVector halfWidths;
  RationalVector apex;
  RationalVector second;
  Rational radiusSquared = 0;

  static SymmetricBody cubeSection(IntegerMatrix constraints, RationalVector d) {
    SymmetricBody s;
    s.kind = BodyKind::CubeSection;
    s.dim = d.size();
    s.constraints = std::move(constraints);
    s.halfWidths = std::move(d);
    return s;
  }
  static SymmetricBody bipyramid(IntegerMatrix a, RationalVector c, RationalVector apex,
                                 RationalVector d) {
    SymmetricBody s;
    s.kind = BodyKind::Bipyramid;
    s.dim = d.size();
    s.constraints = std::move(a);
    s.cost = std::move(c);
    s.apex = std::move(apex);
    s.halfWidths = std::move(d);
    return s;
  }
  static SymmetricBody unionHull(const RationalVector& u, const RationalVector& v) {
    SymmetricBody s;
    s.kind = BodyKind::UnionHull;
    s.dim = u.size();
    for (std::size_t i = 0; i < u.size(); ++i) s.apex.push_back(u[i] - v[i]);
    return s;
  }
  static SymmetricBody hull(RationalVector u, RationalVector v) {
    SymmetricBody s;
    s.kind = BodyKind::Hull;
    s.dim = u.size();
    s.apex = std::move(u);
    s.second = std::move(v);
    return s;
  }
  static SymmetricBody ball(std::size_t dim, Rational radiusSquared) {
    SymmetricBody s;
    s.kind = BodyKind::Ball;
    s.dim = dim;
    s.radiusSquared = std::move(radiusSquared);
    return s;
  }
  static SymmetricBody segment(RationalVector direction, Rational halfLengthSquared) {
    SymmetricBody s;
    s.kind = BodyKind::Segment;
    s.dim = direction.size();
    s.apex = std::move(direction);
    s.radiusSquared = std::move(halfLengthSquared);
    return s;
  }

  bool isOriginSymmetric() const { return kind != BodyKind::Hull; }

  /// Exact membership of a rational point.
  bool contains(const RationalVector& p) const {
    if (p.size() != dim) throw Error(ErrorKind::DimensionMismatch, "point dimension");
    switch (kind) {
      case BodyKind::CubeSection: {
        if (constraints.rows() > 0 && multiply(constraints, p) != RationalVector(constraints.rows(), 0))
          return false;
        for (std::size_t i = 0; i < dim; ++i)
          if (!(abs(p[i]) < halfWidths[i])) return false;
        return true;
      }
      case BodyKind::Bipyramid: {
        if (constraints.rows() > 0 && multiply(constraints, p) != RationalVector(constraints.rows(), 0))
          return false;
        const Rational cw = dot(cost, apex);
        if (cw == 0) throw Error(ErrorKind::InvalidArgument, "apex lies in the base hyperplane");
        const Rational t = dot(cost, p) / cw;
        const Rational at = abs(t);
        if (at > 1) return false;
        if (at == 1) {
          for (std::size_t i = 0; i < dim; ++i)
            if (p[i] != t * apex[i]) return false;
          return true;
        }
        for (std::size_t i = 0; i < dim; ++i)
          if (!(abs(p[i] - t * apex[i]) < (1 - at) * halfWidths[i])) return false;
        return true;
      }
      case BodyKind::UnionHull:
        return detail::cubeSweepContains<Rational>(p, RationalVector(dim, 0), apex, Rational(-1),
                                                   Rational(1));
      case BodyKind::Hull: return inHullBody(p, apex, second);
      case BodyKind::Ball: {
        Rational s = 0;
        for (const auto& x : p) s += x * x;
        return s < radiusSquared;
      }
      case BodyKind::Segment: {
        // p = t·apex for some t, found from the largest apex coordinate.
        std::size_t k = 0;
        for (std::size_t i = 0; i < dim; ++i)
          if (abs(apex[i]) > abs(apex[k])) k = i;
        if (apex[k] == 0) return false;
        const Rational t = p[k] / apex[k];
        Rational s = 0;
        for (std::size_t i = 0; i < dim; ++i) {
          if (p[i] != t * apex[i]) return false;
          s += p[i] * p[i];
        }
        return s < radiusSquared;
      }
    }
    return false;
  }

  bool contains(const IntegerVector& p) const { return contains(toRational(p)); }

  /// Floating-point membership for sampling; uses the same strict
  /// inequalities. Subspace constraints hold up to 1e−9 relative.
  bool containsApprox(const Vec& p) const {
    auto inKernel = [&](const IntegerMatrix& m) {
      for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0, scale = 0;
        for (std::size_t j = 0; j < dim; ++j) {
          const double term = m(i, j).get_d() * p[static_cast<Eigen::Index>(j)];
          s += term;
          scale += std::fabs(term);
        }
        if (std::fabs(s) > 1e-9 * (1 + scale)) return false;
      }
      return true;
    };
    const std::vector<double> x = detail::toStd(p);
    switch (kind) {
      case BodyKind::CubeSection:
        if (!inKernel(constraints)) return false;
        for (std::size_t i = 0; i < dim; ++i)
          if (!(std::fabs(x[i]) < halfWidths[i].get_d())) return false;
        return true;
      case BodyKind::Bipyramid: {
        if (!inKernel(constraints)) return false;
        const std::vector<double> c = detail::toStd(cost), w = detail::toStd(apex);
        double cp = 0, cw = 0;
        for (std::size_t i = 0; i < dim; ++i) {
          cp += c[i] * x[i];
          cw += c[i] * w[i];
        }
        const double t = cp / cw, at = std::fabs(t);
        if (!(at < 1)) return false;
        for (std::size_t i = 0; i < dim; ++i)
          if (!(std::fabs(x[i] - t * w[i]) < (1 - at) * halfWidths[i].get_d())) return false;
        return true;
      }
      case BodyKind::UnionHull:
        return detail::cubeSweepContains<double>(x, std::vector<double>(dim, 0.0),
                                                 detail::toStd(apex), -1.0, 1.0);
      case BodyKind::Hull: {
        const std::vector<double> u = detail::toStd(apex), v = detail::toStd(second);
        std::vector<double> dir(dim);
        for (std::size_t i = 0; i < dim; ++i) dir[i] = u[i] - v[i];
        return detail::cubeSweepContains<double>(x, v, dir, 0.0, 1.0);
      }
      case BodyKind::Ball: return p.squaredNorm() < radiusSquared.get_d();
      case BodyKind::Segment: {
        const Vec a = toVec(apex);
        const double t = p.dot(a) / a.squaredNorm();
        if ((p - t * a).norm() > 1e-9 * (1 + p.norm())) return false;
        return p.squaredNorm() < radiusSquared.get_d();
      }
    }
    return false;
  }

  /// Positive definite M with the body inside the ellipsoid {p : pᵀMp < 1}.
  /// Thin bodies get a cylinder-shaped ellipsoid around their axis so the
  /// lattice search does not scan a whole ball.
  Mat boundingForm() const {
    const auto n = static_cast<Eigen::Index>(dim);
    // Points t·w + e with |t| <= 1 and ‖e‖₂ < rho lie in the ellipsoid
    // (p·ŵ)²/(‖w‖+rho)² + ‖p⊥‖²/rho² < 2.
    auto cylinder = [&](const Vec& w, double rho) -> Mat {
      const double len = w.norm();
      if (len == 0) return Mat::Identity(n, n) / (rho * rho);
      const Vec u = w / len;
      const Mat along = u * u.transpose();
      return (along / std::pow(len + rho, 2) + (Mat::Identity(n, n) - along) / (rho * rho)) / 2;
    };
    switch (kind) {
      case BodyKind::CubeSection: {
        Vec diag(n);
        for (Eigen::Index i = 0; i < n; ++i)
          diag[i] = 1 / (static_cast<double>(dim) * std::pow(halfWidths[static_cast<std::size_t>(i)].get_d(), 2));
        return diag.asDiagonal();
      }
      case BodyKind::Bipyramid: return cylinder(toVec(apex), toVec(halfWidths).norm());
      case BodyKind::UnionHull: return cylinder(toVec(apex), std::sqrt(static_cast<double>(dim)));
      case BodyKind::Hull: {
        const double r = std::max(toVec(apex).norm(), toVec(second).norm()) + std::sqrt(static_cast<double>(dim));
        return Mat::Identity(n, n) / (r * r);
      }
      case BodyKind::Ball:
      case BodyKind::Segment: return Mat::Identity(n, n) / radiusSquared.get_d();
    }
    return Mat::Identity(n, n);
  }
};

/// Nonzero lattice point of the body with the lexicographically greatest
/// coefficient vector, or nothing. Coefficients are enumerated depth-first,
/// first coefficient outermost and each running downward, inside the
/// bounding ellipsoid of the body (Fincke–Pohst pruning on the Cholesky
/// factor of BᵀMB, widened slightly so rounding can only add candidates).
/// Membership of every candidate is decided exactly. For a symmetric body the
/// result is the sign-canonical member of a pair ±y.
inline std::optional<IntegerVector> minkowskiLatticePoint(const SymmetricBody& body,
                                                          const LatticeBasis& lattice,
                                                          std::uint64_t nodeCap = 50'000'000) {
  if (lattice.ambientDim != body.dim)
    throw Error(ErrorKind::DimensionMismatch, "lattice and body live in different spaces");
  const std::size_t r = lattice.rank();
  if (r == 0) return std::nullopt;
  const std::size_t n = lattice.ambientDim;
  const auto ri = static_cast<Eigen::Index>(r);

  // Basis columns in reverse so that the last Cholesky level, which is
  // enumerated outermost, is the first coefficient.
  Mat b(static_cast<Eigen::Index>(n), ri);
  for (std::size_t j = 0; j < r; ++j) b.col(ri - 1 - static_cast<Eigen::Index>(j)) = toVec(lattice.vectors[j]);
  const Mat g = b.transpose() * body.boundingForm() * b;
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::DimensionMismatch, "lattice basis is not of full rank");
  const Mat R = llt.matrixU();

  const double budget = 1 + 1e-6;
  std::vector<long> x(r, 0);
  std::vector<double> remaining(r + 1, 0);
  remaining[r] = budget;
  std::uint64_t nodes = 0;
  std::optional<IntegerVector> found;

  // Level i fixes x[i]; its admissible range depends on x[i+1..r-1].
  std::function<bool(Eigen::Index)> visit = [&](Eigen::Index i) -> bool {
    double centre = 0;
    for (Eigen::Index j = i + 1; j < ri; ++j) centre -= R(i, j) * static_cast<double>(x[static_cast<std::size_t>(j)]);
    centre /= R(i, i);
    const double t = std::max(0.0, remaining[static_cast<std::size_t>(i) + 1]);
    const double half = std::sqrt(t) / R(i, i) * (1 + 1e-9) + 1e-9;
    const long hi = static_cast<long>(std::floor(centre + half));
    const long lo = static_cast<long>(std::ceil(centre - half));
    for (long v = hi; v >= lo; --v) {
      if (++nodes > nodeCap)
        throw Error(ErrorKind::BudgetExceeded, "lattice search exceeded " + std::to_string(nodeCap) + " nodes");
      x[static_cast<std::size_t>(i)] = v;
      const double d = R(i, i) * (static_cast<double>(v) - centre);
      remaining[static_cast<std::size_t>(i)] = t - d * d;
      if (i > 0) {
        if (visit(i - 1)) return true;
        continue;
      }
      if (std::all_of(x.begin(), x.end(), [](long c) { return c == 0; })) continue;
      IntegerVector p(n, 0);
      for (std::size_t j = 0; j < r; ++j) {
        const long k = x[r - 1 - j];
        if (k != 0)
          for (std::size_t a = 0; a < n; ++a) p[a] += k * lattice.vectors[j][a];
      }
      if (body.contains(p)) {
        found = std::move(p);
        return true;
      }
    }
    x[static_cast<std::size_t>(i)] = 0;
    return false;
  };
  visit(ri - 1);
  return found;
}

// ---------------------------------------------------------------------------
// Executable replay of the sorted-support argument

enum class WitnessKind { NoWitness, Midpoint, Improvement };

inline const char* toString(WitnessKind k) {
  switch (k) {
    case WitnessKind::NoWitness: return "no-witness";
    case WitnessKind::Midpoint: return "midpoint";
    case WitnessKind::Improvement: return "improvement";
  }
  return "unknown";
}

struct ImprovingWitness {
  WitnessKind kind = WitnessKind::NoWitness;
  /// Lattice point of L found by the search.
  IntegerVector y;
  /// z* + y and z* − y.
  IntegerVector yPlus, yMinus;
  std::string note;
};

/// Builds L = conv(±(x*−z*), K) with K = ker([A; c]) ∩ Π(−(z_i+1), z_i+1)
/// and searches it for a nonzero point of Λ(A). A point y yields either two
/// integer points z*±y of P with midpoint z* (when c·y = 0) or an integer
/// point z*+y of P with smaller cost; each is verified before being returned.
/// For an optimal hull vertex z* the search must come back empty.
inline ImprovingWitness improvingPointConstruction(const Instance& inst, const VertexSolution& xStar,
                                                   const IntegerSolution& zStar,
                                                   std::uint64_t nodeCap = 50'000'000) {
  const std::size_t n = inst.cols();
  if (zStar.z.size() != n || xStar.x.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "x* and z* must have length n");
  if (std::any_of(zStar.z.begin(), zStar.z.end(), [](const Integer& v) { return v < 0; }) ||
      multiply(inst.A, zStar.z) != inst.b)
    throw Error(ErrorKind::InvalidArgument, "z* is not an integer point of P(A,b)");
  if (!detail::inPolyhedron(inst, xStar.x))
    throw Error(ErrorKind::InvalidArgument, "x* is not a point of P(A,b)");

  ImprovingWitness out;
  RationalVector w(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = xStar.x[i] - zStar.z[i];
    d[i] = zStar.z[i] + 1;
  }
  if (dot(inst.c, w) >= 0) {
    out.note = "c·(z*−x*) <= 0: nothing to contradict";
    return out;
  }
  SymmetricBody body = SymmetricBody::bipyramid(inst.A, inst.c, w, d);
  auto y = minkowskiLatticePoint(body, kernelLatticeBasis(inst.A), nodeCap);
  if (!y) {
    out.note = "L contains no nonzero point of the kernel lattice";
    return out;
  }
  IntegerVector yy = *y;
  Rational cy = dot(inst.c, yy);
  if (cy > 0) {
    for (auto& v : yy) v = -v;
    cy = -cy;
  }
  out.y = yy;
  for (std::size_t i = 0; i < n; ++i) {
    out.yPlus.push_back(zStar.z[i] + yy[i]);
    out.yMinus.push_back(zStar.z[i] - yy[i]);
  }
  auto inP = [&](const IntegerVector& p) {
    return std::all_of(p.begin(), p.end(), [](const Integer& v) { return v >= 0; }) &&
           multiply(inst.A, p) == inst.b;
  };
  if (cy == 0) {
    if (!inP(out.yPlus) || !inP(out.yMinus))
      throw std::logic_error("midpoint witness left P(A,b)");
    out.kind = WitnessKind::Midpoint;
    out.note = "z* is the midpoint of two integer points of P";
  } else {
    if (!inP(out.yPlus) || !(dot(inst.c, out.yPlus) < zStar.value))
      throw std::logic_error("improvement witness failed verification");
    out.kind = WitnessKind::Improvement;
    out.note = "z*+y is a cheaper integer point of P";
  }
  return out;
}

}  // namespace igap
