#pragma once

// Command implementations shared by the igap executable and the acceptance
// runner. Every command writes one JSON document and returns an exit status.

#include "igap/igap.hpp"

#include <iosfwd>

namespace igap::cli {

enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kInfeasibleOrUnbounded = 3,
  kBudget = 4,
  kViolation = 5,
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t count = 500;
  FamilyParameters family;
};

struct NamedInstance {
  std::string name;
  Instance instance;
};

std::vector<NamedInstance> generateNamed(const SuiteOptions& suite);

// analyze -------------------------------------------------------------------

struct AnalyzeOptions {
  std::string path;
  std::uint64_t nodeCap = 10'000'000;
  long precisionBits = 128;
};

/// Report document for one instance, or an error object. Exit status per
/// the table in Exit.
int analyze(const AnalyzeOptions& options, std::ostream& out);

// generate ------------------------------------------------------------------

Json generateDocument(const SuiteOptions& suite);

// certify -------------------------------------------------------------------

struct CertifyOptions {
  SuiteOptions suite;
  /// When non-empty, certify these instance files instead of a generated suite.
  std::vector<std::string> files;
  std::uint64_t nodeCap = 10'000'000;
  long precisionBits = 128;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct BoundStats {
  std::string name;
  std::size_t applicable = 0, satisfied = 0, violated = 0;
  /// Largest gap/bound ratio over instances with a positive bound.
  double worstRatio = 0;
  std::string worstInstance;
};

struct CertifySummary {
  std::size_t instances = 0, passed = 0, withViolations = 0;
  std::size_t budgetExceeded = 0, infeasible = 0, unbounded = 0;
  std::size_t violations = 0;
  std::size_t proximityChecks = 0, proximityViolations = 0;
  double worstProximityRatio = 0;
  std::vector<BoundStats> bounds;
  std::vector<std::string> budgetExceededNames;
  /// Full instance and report for every instance with a violated bound.
  Json counterexamples = Json::array();
  /// Reports in instance order, kept when requested.
  std::vector<BoundReport> reports;
};

CertifySummary certifyInstances(const std::vector<NamedInstance>& instances,
                                const CertifyOptions& options, bool keepReports = false);
Json toJson(const CertifySummary& summary);
int exitStatus(const CertifySummary& summary);

/// Loads files or generates the suite, certifies, writes the summary.
int certify(const CertifyOptions& options, std::ostream& out);

// verify-geometry -----------------------------------------------------------

struct GeometryOptions {
  /// Largest dimension for Monte-Carlo suites.
  std::size_t dims = 4;
  /// Largest ambient dimension for the closed-form volume suites.
  std::size_t sectionDims = 6;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  std::size_t sections = 200;
  std::size_t sliceCases = 16;
  std::size_t eBodyCases = 12;
  std::size_t ballCases = 40;
};

enum class CaseVerdict { Pass, Fail, Skipped };

struct GeometryCase {
  std::string suite;
  std::string label;
  double bound = 0;
  /// Estimate or computed value compared against the bound.
  double value = 0;
  double sigma = 0;
  std::optional<double> exact;
  CaseVerdict verdict = CaseVerdict::Pass;
  std::string note;
};

struct GeometrySummary {
  std::vector<GeometryCase> cases;
  std::vector<std::string> notices;
  std::size_t count(std::string_view suite, CaseVerdict v) const;
  std::size_t failures() const;
};

GeometrySummary verifyGeometry(const GeometryOptions& options);
Json toJson(const GeometrySummary& summary, const GeometryOptions& options);

}  // namespace igap::cli
