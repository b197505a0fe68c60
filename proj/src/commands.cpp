#include "commands.hpp"

#include <atomic>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>

namespace igap::cli {

namespace {

Json errorDocument(const std::string& kind, const std::string& message) {
  return Json{{"error", Json{{"kind", kind}, {"message", message}}}};
}

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

ReportOptions reportOptions(std::uint64_t nodeCap, long bits) {
  ReportOptions o;
  o.integer.nodeCap = nodeCap;
  o.precisionBits = bits;
  return o;
}

int statusExit(const BoundReport& r) {
  switch (r.status) {
    case ReportStatus::Infeasible:
    case ReportStatus::Unbounded: return kInfeasibleOrUnbounded;
    case ReportStatus::BudgetExceeded: return kBudget;
    case ReportStatus::Ok: break;
  }
  return r.violations() > 0 ? kViolation : kOk;
}

std::string baseName(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

std::vector<NamedInstance> generateNamed(const SuiteOptions& suite) {
  std::vector<NamedInstance> out;
  for (auto& g : generateSuite(suite.seed, suite.count, suite.family))
    out.push_back({std::move(g.name), std::move(g.instance)});
  return out;
}

// analyze -------------------------------------------------------------------

int analyze(const AnalyzeOptions& options, std::ostream& out) {
  InstanceFile file;
  try {
    file = readInstanceFile(options.path);
  } catch (const Error& e) {
    out << errorDocument(toString(e.kind()), e.what()).dump(2) << "\n";
    return kUsage;
  }
  BoundReport rep;
  try {
    rep = fullReport(file.instance, reportOptions(options.nodeCap, options.precisionBits));
  } catch (const Error& e) {
    out << errorDocument(toString(e.kind()), e.what()).dump(2) << "\n";
    return kUsage;
  }
  Json doc{{"instance", toJson(file)}, {"report", toJson(rep)}};
  out << doc.dump(2) << "\n";
  return statusExit(rep);
}

// generate ------------------------------------------------------------------

namespace {

Json familyManifest(const SuiteOptions& suite) {
  const auto& f = suite.family;
  Json j{{"seed", suite.seed}, {"count", suite.count}, {"m", Json::array({f.mMin, f.mMax})}};
  if (f.nFixed)
    j["n"] = *f.nFixed;
  else
    j["n_minus_m"] = Json::array({f.nOffsetMin, f.nOffsetMax});
  j["entry_bound"] = f.entryBound;
  return j;
}

}  // namespace

Json generateDocument(const SuiteOptions& suite) {
  Json manifest = familyManifest(suite);
  Json instances = Json::array();
  for (const auto& g : generateSuite(suite.seed, suite.count, suite.family))
    instances.push_back(toJson(InstanceFile{g.name, g.instance, std::nullopt}));
  return Json{{"manifest", std::move(manifest)}, {"instances", std::move(instances)}};
}

// certify -------------------------------------------------------------------

CertifySummary certifyInstances(const std::vector<NamedInstance>& instances,
                                const CertifyOptions& options, bool keepReports) {
  const ReportOptions ro = reportOptions(options.nodeCap, options.precisionBits);
  std::vector<BoundReport> reports(instances.size());
  std::vector<std::string> failures(instances.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        reports[i] = fullReport(instances[i].instance, ro);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, instances.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  CertifySummary s;
  s.instances = instances.size();
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!failures[i].empty())
      throw std::runtime_error(instances[i].name + ": " + failures[i]);
    const BoundReport& r = reports[i];
    switch (r.status) {
      case ReportStatus::BudgetExceeded:
        ++s.budgetExceeded;
        s.budgetExceededNames.push_back(instances[i].name);
        continue;
      case ReportStatus::Infeasible: ++s.infeasible; continue;
      case ReportStatus::Unbounded: ++s.unbounded; continue;
      case ReportStatus::Ok: break;
    }
    for (const auto& b : r.bounds) {
      auto [it, fresh] = slot.try_emplace(b.name, s.bounds.size());
      if (fresh) {
        BoundStats entry;
        entry.name = b.name;
        s.bounds.push_back(std::move(entry));
      }
      BoundStats& st = s.bounds[it->second];
      if (!b.applicable) continue;
      ++st.applicable;
      if (b.check.verdict == Verdict::Satisfied) ++st.satisfied;
      if (b.check.verdict == Verdict::Violated) ++st.violated;
      const double bound = b.expression.approx();
      if (bound > 0) {
        const double ratio = r.gap.get_d() / bound;
        if (ratio > st.worstRatio) {
          st.worstRatio = ratio;
          st.worstInstance = instances[i].name;
        }
      }
    }
    const double proxBound = r.proximityBound.approx();
    for (const auto& p : r.proximity) {
      ++s.proximityChecks;
      if (p.check.verdict == Verdict::Violated) ++s.proximityViolations;
      if (proxBound > 0)
        s.worstProximityRatio =
            std::max(s.worstProximityRatio, std::sqrt(p.nearest.distanceSquared.get_d()) / proxBound);
    }
    const std::size_t v = r.violations();
    s.violations += v;
    if (v == 0) {
      ++s.passed;
    } else {
      ++s.withViolations;
      s.counterexamples.push_back(Json{
          {"name", instances[i].name},
          {"instance", toJson(InstanceFile{instances[i].name, instances[i].instance, std::nullopt})},
          {"report", toJson(r)}});
    }
  }
  if (keepReports) s.reports = std::move(reports);
  return s;
}

Json toJson(const CertifySummary& s) {
  Json bounds = Json::array();
  for (const auto& b : s.bounds)
    bounds.push_back(Json{{"name", b.name},
                          {"applicable", b.applicable},
                          {"satisfied", b.satisfied},
                          {"violated", b.violated},
                          {"worst_gap_to_bound", fixed(b.worstRatio)},
                          {"worst_instance", b.worstInstance}});
  return Json{{"instances", s.instances},
              {"passed", s.passed},
              {"with_violations", s.withViolations},
              {"violations", s.violations},
              {"budget_exceeded", s.budgetExceeded},
              {"budget_exceeded_instances", s.budgetExceededNames},
              {"infeasible", s.infeasible},
              {"unbounded", s.unbounded},
              {"proximity",
               Json{{"vertex_checks", s.proximityChecks},
                    {"violations", s.proximityViolations},
                    {"worst_distance_to_bound", fixed(s.worstProximityRatio)}}},
              {"bounds", std::move(bounds)},
              {"counterexamples", s.counterexamples}};
}

int exitStatus(const CertifySummary& s) {
  if (s.violations > 0) return kViolation;
  if (s.budgetExceeded > 0) return kBudget;
  if (s.infeasible > 0 || s.unbounded > 0) return kInfeasibleOrUnbounded;
  return kOk;
}

int certify(const CertifyOptions& options, std::ostream& out) {
  std::vector<NamedInstance> instances;
  Json manifest;
  if (!options.files.empty()) {
    try {
      for (const auto& path : options.files) {
        InstanceFile f = readInstanceFile(path);
        instances.push_back({f.name.value_or(baseName(path)), std::move(f.instance)});
      }
    } catch (const Error& e) {
      out << errorDocument(toString(e.kind()), e.what()).dump(2) << "\n";
      return kUsage;
    }
    manifest = Json{{"files", options.files}};
  } else {
    instances = generateNamed(options.suite);
    manifest = familyManifest(options.suite);
  }
  manifest["node_cap"] = options.nodeCap;
  manifest["precision_bits"] = options.precisionBits;
  CertifySummary s = certifyInstances(instances, options);
  out << Json{{"manifest", std::move(manifest)}, {"summary", toJson(s)}}.dump(2) << "\n";
  return exitStatus(s);
}

// verify-geometry -----------------------------------------------------------

std::size_t GeometrySummary::count(std::string_view suite, CaseVerdict v) const {
  std::size_t k = 0;
  for (const auto& c : cases)
    if (c.suite == suite && c.verdict == v) ++k;
  return k;
}

std::size_t GeometrySummary::failures() const {
  std::size_t k = 0;
  for (const auto& c : cases)
    if (c.verdict == CaseVerdict::Fail) ++k;
  return k;
}

namespace {

const char* toString(CaseVerdict v) {
  switch (v) {
    case CaseVerdict::Pass: return "pass";
    case CaseVerdict::Fail: return "fail";
    case CaseVerdict::Skipped: return "skipped";
  }
  return "unknown";
}

CaseVerdict verdictOf(bool ok) { return ok ? CaseVerdict::Pass : CaseVerdict::Fail; }

Mat randomIntegerMatrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, long bound) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<double>(uniformInt(rng, -bound, bound));
  return m;
}

void sectionSuites(const GeometryOptions& o, GeometrySummary& out) {
  std::mt19937_64 rng(mixSeed(o.seed ^ 0x1e77a1ULL));
  const long maxL = static_cast<long>(std::max<std::size_t>(2, o.sectionDims));
  for (std::size_t i = 0; i < o.sections; ++i) {
    long l, dim;
    Mat frame, gens, d, mix;
    for (;;) {
      l = uniformInt(rng, 2, maxL);
      dim = uniformInt(rng, 1, l);
      frame = orthonormalFrame(randomIntegerMatrix(rng, l, dim, 4));
      gens = randomIntegerMatrix(rng, dim, dim, 3);
      d = Mat(l, l);
      for (Eigen::Index k = 0; k < d.size(); ++k)
        d.data()[k] = static_cast<double>(uniformInt(rng, -9, 9)) / static_cast<double>(uniformInt(rng, 1, 5));
      mix = randomIntegerMatrix(rng, l - dim, l - dim, 3);
      if (frame.cols() == dim && std::fabs(gens.determinant()) >= 0.5 &&
          std::fabs(d.determinant()) >= 1e-6 && (mix.size() == 0 || std::fabs(mix.determinant()) >= 0.5))
        break;
    }
    SubspaceSection s{frame, gens};
    const Mat edges = d * s.ambientGenerators();
    const double oracle = std::sqrt(std::max(0.0, (edges.transpose() * edges).determinant()));
    double value = sectionVolumeTransform(s, d);
    double err = std::fabs(value - oracle) / oracle;
    if (mix.size() > 0) {
      const double viaB = sectionVolumeTransform(s, d, mix * complementRows(d * frame));
      err = std::max(err, std::fabs(viaB - oracle) / oracle);
    }
    const std::string label = "l=" + std::to_string(l) + " k=" + std::to_string(l - dim) + " #" + std::to_string(i);
    GeometryCase c{"section_volume", label, 1e-9, err, 0, oracle, verdictOf(err <= 1e-9), "relative error vs Gram volume of DM"};
    out.cases.push_back(std::move(c));

    const auto lower = eigenvalueVolumeLowerBound(s, d);
    out.cases.push_back({"eigenvalue_bound", label, lower.bound, lower.actual, 0, std::nullopt,
                         verdictOf(lower.holds), "actual >= bound·(1−1e−9)"});
  }
}

GeometryCase sliceCase(const std::string& suite, const std::string& label, const SliceBound& r,
                       std::uint64_t samples) {
  GeometryCase c{suite, label, r.bound, 0, 0, r.exact, CaseVerdict::Pass, ""};
  if (samples > 0) {
    c.value = r.estimate.estimate;
    c.sigma = r.estimate.sigma;
    c.verdict = verdictOf(r.holds);
    c.note = "Monte-Carlo estimate >= bound − 3σ";
  } else if (r.exact) {
    c.value = *r.exact;
    c.verdict = verdictOf(r.holds);
    c.note = "closed form";
  } else {
    c.verdict = CaseVerdict::Skipped;
    c.note = "needs Monte-Carlo samples";
  }
  return c;
}

void boxSliceSuite(const GeometryOptions& o, GeometrySummary& out) {
  MonteCarloOptions mo;
  mo.samples = o.samples;
  std::uint64_t caseSeed = mixSeed(o.seed ^ 0xb0c5ULL);
  auto run = [&](const std::string& label, const std::vector<double>& d, const Mat& span) {
    mo.seed = caseSeed = mixSeed(caseSeed);
    out.cases.push_back(sliceCase("box_slice", label, boxSliceLowerBound(d, span, mo), o.samples));
  };
  Mat diagonal(2, 1);
  diagonal << 1, 1;
  run("diagonal of the square", {1, 1}, diagonal);
  if (o.dims >= 3) {
    Mat plane(3, 2);
    plane << 1, 0, -1, 1, 0, -1;
    run("hexagon x1+x2+x3=0", {1, 1, 1}, plane);
  }
  std::mt19937_64 rng(mixSeed(o.seed ^ 0xb0c6ULL));
  const long maxL = static_cast<long>(std::max<std::size_t>(2, o.dims));
  for (std::size_t i = 0; i < o.sliceCases; ++i) {
    long l, dim;
    Mat span;
    do {
      l = uniformInt(rng, 2, maxL);
      dim = uniformInt(rng, 1, l);
      span = randomIntegerMatrix(rng, l, dim, 3);
    } while (orthonormalFrame(span).cols() != dim);
    std::vector<double> d;
    for (long k = 0; k < l; ++k) d.push_back(static_cast<double>(uniformInt(rng, 1, 6)) / 2);
    std::sort(d.begin(), d.end());
    run("l=" + std::to_string(l) + " k=" + std::to_string(l - dim) + " #" + std::to_string(i), d, span);
  }
}

struct EBodyInput {
  std::string label;
  IntegerMatrix a;
  RationalVector u, v;
};

std::vector<EBodyInput> eBodyInputs(const GeometryOptions& o) {
  std::vector<EBodyInput> inputs{
      {"A=[[1,1]] u=(1,0) v=(0,1)", IntegerMatrix{{1, 1}}, {1, 0}, {0, 1}},
      {"A=[[1,1,1]] u=(1,1,0) v=(0,1,1)", IntegerMatrix{{1, 1, 1}}, {1, 1, 0}, {0, 1, 1}},
      {"A=[[1,1]] u=v=(1,2)", IntegerMatrix{{1, 1}}, {1, 2}, {1, 2}},
  };
  FamilyParameters family;
  family.mMin = 1;
  family.mMax = 2;
  family.nOffsetMin = 1;
  family.nOffsetMax = static_cast<long>(std::max<std::size_t>(1, o.dims));
  std::size_t index = 0, taken = 0;
  while (taken < o.eBodyCases && index < 50 * (o.eBodyCases + 1)) {
    auto g = generateInstance(mixSeed(o.seed ^ 0xeb0dULL), index++, family);
    const auto points = enumerateIntegerPoints(g.instance);
    if (points.size() < 2) continue;
    inputs.push_back({g.name, g.instance.A, toRational(points.front().z), toRational(points.back().z)});
    ++taken;
  }
  return inputs;
}

double ballVolume(std::size_t d, double radius) {
  const double half = static_cast<double>(d) / 2;
  return std::pow(M_PI, half) / std::tgamma(half + 1) * std::pow(radius, static_cast<double>(d));
}

void eBodyAndMinkowskiSuites(const GeometryOptions& o, GeometrySummary& out) {
  MonteCarloOptions mo;
  mo.samples = o.samples;
  std::uint64_t caseSeed = mixSeed(o.seed ^ 0xe60dULL);
  for (const auto& in : eBodyInputs(o)) {
    mo.seed = caseSeed = mixSeed(caseSeed);
    const SliceBound r = eBodySliceBound(in.a, in.u, in.v, mo);
    out.cases.push_back(sliceCase("e_body", in.label, r, o.samples));

    // Lattice-point search in E over Λ(A) ⊂ ker(A).
    const LatticeBasis lat = kernelLatticeBasis(in.a);
    const double threshold = std::ldexp(1.0, static_cast<int>(lat.rank())) *
                             std::sqrt(lat.gramDeterminant().get_d());
    std::optional<double> certified;
    if (o.samples > 0)
      certified = r.estimate.estimate - 3 * r.estimate.sigma;
    else
      certified = r.exact;
    GeometryCase c{"minkowski", "E-body " + in.label, threshold, certified.value_or(0),
                   o.samples ? r.estimate.sigma : 0, r.exact, CaseVerdict::Pass, ""};
    if (!certified) {
      c.verdict = CaseVerdict::Skipped;
      c.note = "volume not certified without samples";
    } else {
      const auto y = minkowskiLatticePoint(SymmetricBody::unionHull(in.u, in.v), lat);
      if (*certified > threshold) {
        c.verdict = verdictOf(y.has_value());
        c.note = y ? "volume certified; point found" : "volume certified but no point found";
      } else {
        c.note = y ? "below threshold; point found anyway" : "below threshold; none found";
      }
    }
    out.cases.push_back(std::move(c));
  }

  // Balls: exact volume, random lattices.
  std::mt19937_64 rng(mixSeed(o.seed ^ 0xba11ULL));
  const long maxD = static_cast<long>(std::clamp<std::size_t>(o.dims, 1, 3));
  for (std::size_t i = 0; i < o.ballCases; ++i) {
    const long d = uniformInt(rng, 1, maxD);
    IntegerMatrix basis(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    do {
      for (long r = 0; r < d; ++r)
        for (long s = 0; s < d; ++s) basis(r, s) = uniformInt(rng, -3, 3);
    } while (determinant(basis) == 0);
    std::vector<IntegerVector> rows;
    for (long r = 0; r < d; ++r) rows.push_back(basis.rowVector(static_cast<std::size_t>(r)));
    const LatticeBasis lat{static_cast<std::size_t>(d), rows};
    const Rational r2 = makeRational(uniformInt(rng, 1, 60), uniformInt(rng, 1, 4));
    const double volume = ballVolume(static_cast<std::size_t>(d), std::sqrt(r2.get_d()));
    const double threshold = std::ldexp(1.0, static_cast<int>(d)) * std::fabs(determinant(basis).get_d());
    const auto y = minkowskiLatticePoint(SymmetricBody::ball(static_cast<std::size_t>(d), r2), lat);
    GeometryCase c{"minkowski", "ball d=" + std::to_string(d) + " r²=" + r2.get_str() + " #" + std::to_string(i),
                   threshold, volume, 0, volume, CaseVerdict::Pass, ""};
    if (volume > threshold * (1 + 1e-9)) {
      c.verdict = verdictOf(y.has_value());
      c.note = y ? "volume certified; point found" : "volume certified but no point found";
    } else {
      c.note = y ? "below threshold; point found anyway" : "below threshold; none found";
    }
    out.cases.push_back(std::move(c));
  }
}

}  // namespace

GeometrySummary verifyGeometry(const GeometryOptions& o) {
  GeometrySummary out;
  if (o.samples == 0)
    out.notices.push_back("samples = 0: Monte-Carlo estimates skipped; only closed-form checks ran");
  sectionSuites(o, out);
  boxSliceSuite(o, out);
  eBodyAndMinkowskiSuites(o, out);
  return out;
}

Json toJson(const GeometrySummary& s, const GeometryOptions& o) {
  Json suites = Json::array();
  for (const char* name : {"section_volume", "eigenvalue_bound", "box_slice", "e_body", "minkowski"})
    suites.push_back(Json{{"suite", name},
                          {"pass", s.count(name, CaseVerdict::Pass)},
                          {"fail", s.count(name, CaseVerdict::Fail)},
                          {"skipped", s.count(name, CaseVerdict::Skipped)}});
  Json cases = Json::array();
  for (const auto& c : s.cases) {
    Json j{{"suite", c.suite}, {"case", c.label}, {"bound", c.bound}, {"value", c.value}};
    if (c.sigma > 0) j["sigma"] = c.sigma;
    if (c.exact) j["exact"] = *c.exact;
    j["verdict"] = toString(c.verdict);
    j["note"] = c.note;
    cases.push_back(std::move(j));
  }
  return Json{{"manifest", Json{{"seed", o.seed}, {"samples", o.samples}, {"dims", o.dims},
                                {"section_dims", o.sectionDims}}},
              {"notices", s.notices},
              {"suites", std::move(suites)},
              {"failures", s.failures()},
              {"cases", std::move(cases)}};
}

}  // namespace igap::cli
