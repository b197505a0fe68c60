#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace igap::cli;

namespace {

struct FamilyFlags {
  std::optional<long> m, n;
  long entryBound = 5;

  void add(CLI::App* app) {
    app->add_option("--m", m, "Fix the number of rows (default: 1..3)")->check(CLI::Range(1, 12));
    app->add_option("--n", n, "Fix the number of columns (default: m+1..m+5)")->check(CLI::Range(2, 24));
    app->add_option("--entry-bound", entryBound, "Bound on |a_ij|")->check(CLI::Range(1, 1000));
  }
  igap::FamilyParameters family() const {
    igap::FamilyParameters f;
    if (m) f.mMin = f.mMax = *m;
    if (n && !m) f.mMax = std::min(f.mMax, *n - 1);
    f.nFixed = n;
    f.entryBound = entryBound;
    return f;
  }
};

/// Runs `body` against stdout or the --out file.
int emit(const std::string& outPath, const std::function<int(std::ostream&)>& body) {
  if (outPath.empty()) return body(std::cout);
  std::ofstream file(outPath);
  if (!file) {
    std::cerr << "igap: cannot write '" << outPath << "'\n";
    return kUsage;
  }
  return body(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrality gaps, proximity and sparsity bounds for standard-form integer programs"};
  app.require_subcommand(1);
  std::string outPath;

  AnalyzeOptions analyzeOpts;
  auto* analyzeCmd = app.add_subcommand("analyze", "Analyze one instance file");
  analyzeCmd->add_option("path", analyzeOpts.path, "Instance JSON file")->required();
  analyzeCmd->add_option("--node-cap", analyzeOpts.nodeCap, "Enumeration and branching budget");
  analyzeCmd->add_option("--precision-bits", analyzeOpts.precisionBits, "Initial MPFR precision")
      ->check(CLI::Range(16, 1 << 16));
  analyzeCmd->add_option("--out", outPath, "Write the report to this file");

  SuiteOptions generateOpts;
  generateOpts.count = 10;
  FamilyFlags generateFamily;
  auto* generateCmd = app.add_subcommand("generate", "Generate a seeded instance suite");
  generateCmd->add_option("--seed", generateOpts.seed, "Suite seed");
  generateCmd->add_option("--count", generateOpts.count, "Number of instances");
  generateFamily.add(generateCmd);
  generateCmd->add_option("--out", outPath, "Write the suite to this file");

  CertifyOptions certifyOpts;
  FamilyFlags certifyFamily;
  auto* certifyCmd = app.add_subcommand("certify", "Certify every bound on a suite or on instance files");
  certifyCmd->add_option("files", certifyOpts.files, "Instance files (default: generated suite)");
  certifyCmd->add_option("--seed", certifyOpts.suite.seed, "Suite seed");
  certifyCmd->add_option("--count", certifyOpts.suite.count, "Number of generated instances");
  certifyFamily.add(certifyCmd);
  certifyCmd->add_option("--node-cap", certifyOpts.nodeCap, "Per-instance enumeration budget");
  certifyCmd->add_option("--precision-bits", certifyOpts.precisionBits, "Initial MPFR precision")
      ->check(CLI::Range(16, 1 << 16));
  certifyCmd->add_option("--threads", certifyOpts.threads, "Worker threads (0: all cores)");
  certifyCmd->add_option("--out", outPath, "Write the summary to this file");

  GeometryOptions geometryOpts;
  auto* geometryCmd = app.add_subcommand("verify-geometry", "Run the volume and lattice-point suites");
  geometryCmd->add_option("--dims", geometryOpts.dims, "Largest dimension for Monte-Carlo suites")
      ->check(CLI::Range(2, 8));
  geometryCmd->add_option("--samples", geometryOpts.samples, "Monte-Carlo samples per case (0: skip)");
  geometryCmd->add_option("--seed", geometryOpts.seed, "Seed");
  geometryCmd->add_option("--out", outPath, "Write the summary to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (analyzeCmd->parsed())
      return emit(outPath, [&](std::ostream& out) { return analyze(analyzeOpts, out); });
    if (generateCmd->parsed()) {
      generateOpts.family = generateFamily.family();
      return emit(outPath, [&](std::ostream& out) {
        out << generateDocument(generateOpts).dump(2) << "\n";
        return kOk;
      });
    }
    if (certifyCmd->parsed()) {
      certifyOpts.suite.family = certifyFamily.family();
      return emit(outPath, [&](std::ostream& out) { return certify(certifyOpts, out); });
    }
    if (geometryCmd->parsed()) {
      return emit(outPath, [&](std::ostream& out) {
        const GeometrySummary s = verifyGeometry(geometryOpts);
        for (const auto& notice : s.notices) std::cerr << "igap: " << notice << "\n";
        out << toJson(s, geometryOpts).dump(2) << "\n";
        return s.failures() > 0 ? kViolation : kOk;
      });
    }
  } catch (const igap::Error& e) {
    std::cerr << "igap: " << toString(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == igap::ErrorKind::BudgetExceeded ? kBudget : kUsage;
  }
  return kUsage;
}
