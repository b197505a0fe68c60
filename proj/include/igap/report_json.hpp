#pragma once

// Machine-readable rendering of analysis reports. Exact quantities are
// "p/q" strings; irrational bounds are decimals rounded upward and marked "↑".

#include "igap/bounds.hpp"
#include "igap/instance_io.hpp"

namespace igap {

/// Symbolic form such as "2 + √13 − √7".
inline std::string expressionText(const BoundExpression& e) {
  std::string out;
  if (e.rational != 0 || (e.plusRoot == 0 && e.minusRoot == 0)) out = e.rational.get_str();
  if (e.plusRoot != 0) out += (out.empty() ? "√" : " + √") + e.plusRoot.get_str();
  if (e.minusRoot != 0) out += (out.empty() ? "−√" : " − √") + e.minusRoot.get_str();
  return out;
}

inline const char* verdictMark(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "✓";
    case Verdict::Violated: return "✗";
    case Verdict::Indeterminate: return "?";
  }
  return "?";
}

inline Json toJson(const CertifiedComparison& c) {
  return Json{{"verdict", toString(c.verdict)},
              {"mark", verdictMark(c.verdict)},
              {"precision_bits", c.bits},
              {"exact_fallback", c.exactFallback}};
}

inline Json toJson(const MatrixInvariants& inv) {
  Json deltaR = Json::array();
  for (const auto& d : inv.deltaR) deltaR.push_back(d ? Json(d->get_str()) : Json(nullptr));
  return Json{{"det_AAT", inv.gramDet.get_str()},
              {"delta", "√" + inv.gramDet.get_str()},
              {"delta_r", std::move(deltaR)},
              {"gcd_minors", inv.gcdMinors.get_str()},
              {"gcd_cross_checked", inv.gcdCrossChecked},
              {"rank", inv.rank},
              {"lattice_det_squared", inv.latticeDetSquared().get_str()}};
}

inline Json toJson(const IntegerSolution& z) {
  return Json{{"z", toJson(z.z)}, {"value", z.value.get_str()}, {"support_size", z.supportSize}};
}

inline Json toJson(const BoundEntry& b) {
  Json j{{"name", b.name}, {"applicable", b.applicable}};
  if (!b.applicable) {
    j["reason"] = b.reason;
    return j;
  }
  j["expression"] = expressionText(b.expression);
  j["value"] = b.valueText;
  j["rounding"] = b.expression.isRational() ? "exact" : "upward";
  j["check"] = toJson(b.check);
  return j;
}

inline Json toJson(const BoundReport& r) {
  Json j{{"status", toString(r.status)}};
  if (!r.statusDetail.empty()) j["detail"] = r.statusDetail;
  j["invariants"] = toJson(r.invariants);
  j["cost_norms"] = Json{{"norm2_squared", r.norms.norm2Squared.get_str()},
                         {"norm1", r.norms.norm1.get_str()},
                         {"norm_inf", r.norms.normInf.get_str()}};
  if (r.status != ReportStatus::Ok) return j;
  Json basis = Json::array();
  for (auto i : r.lpVertex.basis) basis.push_back(i);
  j["lp"] = Json{{"value", r.lpValue.get_str()}, {"x", toJson(r.lpVertex.x)}, {"basis", std::move(basis)}};
  j["ip"] = toJson(r.solverZ);
  j["gap"] = r.gap.get_str();
  j["sparsest_ip"] = r.sparsestZ ? toJson(*r.sparsestZ) : Json(nullptr);
  j["integer_point_count"] = r.integerPointCount;
  if (r.nearest)
    j["nearest_to_lp"] = Json{{"z", toJson(r.nearest->point.z)},
                              {"distance_squared", r.nearest->distanceSquared.get_str()}};
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(toJson(b));
  j["bounds"] = std::move(bounds);
  Json checks = Json::array();
  for (const auto& p : r.proximity)
    checks.push_back(Json{{"vertex", toJson(p.vertex.x)},
                          {"nearest", toJson(p.nearest.point.z)},
                          {"distance_squared", p.nearest.distanceSquared.get_str()},
                          {"check", toJson(p.check)}});
  j["proximity"] = Json{{"distance_bound", expressionText(r.proximityBound)},
                        {"distance_bound_value", formatBound(r.proximityBound)},
                        {"vertices", std::move(checks)}};
  j["violations"] = r.violations();
  return j;
}

}  // namespace igap
