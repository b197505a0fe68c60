#pragma once

// Seeded random instance families. Every instance is integer-feasible by
// construction (b = A x0 with x0 a nonnegative integer point) and P(A,b) is a
// polytope, so all enumeration oracles are exhaustive.

#include "igap/polyhedra.hpp"

#include <cstdio>
#include <limits>
#include <random>

namespace igap {

/// Portable uniform integer in [lo, hi] (rejection sampling; the standard
/// distributions are implementation-defined).
inline long uniformInt(std::mt19937_64& rng, long lo, long hi) {
  if (lo > hi) throw Error(ErrorKind::InvalidArgument, "empty sampling range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<long>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do draw = rng();
  while (draw >= limit);
  return lo + static_cast<long>(draw % span);
}

/// splitmix64 finaliser, used to derive independent per-instance streams.
inline std::uint64_t mixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct FamilyParameters {
  long mMin = 1, mMax = 3;
  /// n is drawn from [m + nOffsetMin, m + nOffsetMax] unless nFixed is set.
  long nOffsetMin = 1, nOffsetMax = 5;
  std::optional<long> nFixed;
  long entryBound = 5;
  long x0Bound = 3;
  long costNumeratorBound = 5;
  long costDenominatorBound = 3;
};

struct GeneratedInstance {
  std::string name;
  Instance instance;
  IntegerVector x0;
};

/// Instance number `index` of the family; independent of every other index.
inline GeneratedInstance generateInstance(std::uint64_t seed, std::size_t index,
                                          const FamilyParameters& family) {
  std::mt19937_64 rng(mixSeed(seed ^ mixSeed(index)));
  const long m = uniformInt(rng, family.mMin, family.mMax);
  const long n = family.nFixed ? *family.nFixed
                               : uniformInt(rng, m + family.nOffsetMin, m + family.nOffsetMax);
  if (m < 1 || n <= m) throw Error(ErrorKind::InvalidArgument, "need 1 <= m < n");

  GeneratedInstance g;
  char buf[32];
  std::snprintf(buf, sizeof buf, "inst-%04zu", index);
  g.name = buf;
  IntegerMatrix a(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  for (;;) {
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < n; ++j) a(i, j) = uniformInt(rng, -family.entryBound, family.entryBound);
    if (rank(a) != static_cast<std::size_t>(m)) continue;
    Instance probe{a, IntegerVector(m, 0), RationalVector(n, 0)};
    if (isPolytope(probe)) break;
  }
  g.x0.resize(n);
  for (auto& v : g.x0) v = uniformInt(rng, 0, family.x0Bound);
  RationalVector c(n);
  for (auto& v : c)
    v = makeRational(uniformInt(rng, -family.costNumeratorBound, family.costNumeratorBound),
                     uniformInt(rng, 1, family.costDenominatorBound));
  g.instance = Instance::make(a, multiply(a, g.x0), std::move(c));
  return g;
}

inline std::vector<GeneratedInstance> generateSuite(std::uint64_t seed, std::size_t count,
                                                    const FamilyParameters& family = {}) {
  std::vector<GeneratedInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generateInstance(seed, i, family));
  return out;
}

}  // namespace igap
