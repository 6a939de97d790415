#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "corkforge/common.hpp"
#include "corkforge/version.hpp"

// Verification reports.  Every published verdict embeds the tool version,
// the input hash and the tolerances used, so a report is reproducible on its
// own.  The mapping-class-group bound report is the artifact the proof
// traces import: it certifies an isometry count for the relevant filled
// manifolds together with the orientation behaviour of the isometries and
// the parameter range the certification covers.

namespace corkforge::hyp {

struct McgSweepRow {
  i64 n = 0;
  double volume = 0.0;
  double residual = 0.0;
  bool certified = false;
  std::vector<double> core_lengths;  // real lengths, one per filled cusp

  bool operator==(const McgSweepRow&) const = default;
};

struct McgBoundReport {
  std::string status;                  // "verified" | "partial" | "failed"
  int classes_at_most = 0;             // upper bound on mapping classes
  bool orientation_reversing = false;  // some isometry reverses orientation
  i64 min_abs_n = 0;                   // certified for |n| >= min_abs_n
  std::vector<std::string> assumptions;
  std::string tool_version = corkforge::version;
  std::string input_sha256;
  double tolerance = 0.0;
  // pipeline detail
  i64 n_lo = 0, n_hi = 0;        // requested sweep range
  double complete_volume = 0.0;  // of the unfilled exterior
  int aut_order = 0;
  int aut_reversing = 0;         // orientation-reversing element count
  std::string canonicity;        // canonical_verify verdict on the exterior
  std::string diagnostics;       // why status fell short of "verified"
  std::vector<McgSweepRow> sweep;

  bool operator==(const McgBoundReport&) const = default;
};

inline nlohmann::json mcg_report_to_json(const McgBoundReport& r) {
  nlohmann::json j;
  j["version"] = "mcg-bound-report/1";
  j["status"] = r.status;
  j["classes_at_most"] = r.classes_at_most;
  j["orientation_reversing"] = r.orientation_reversing;
  j["min_abs_n"] = r.min_abs_n;
  j["assumptions"] = r.assumptions;
  j["tool_version"] = r.tool_version;
  j["input_sha256"] = r.input_sha256;
  j["tolerance"] = r.tolerance;
  j["n_range"] = {r.n_lo, r.n_hi};
  j["complete_volume"] = r.complete_volume;
  j["aut_order"] = r.aut_order;
  j["aut_reversing"] = r.aut_reversing;
  j["canonicity"] = r.canonicity;
  j["diagnostics"] = r.diagnostics;
  nlohmann::json rows = nlohmann::json::array();
  for (const McgSweepRow& s : r.sweep) {
    nlohmann::json row;
    row["n"] = s.n;
    row["volume"] = s.volume;
    row["residual"] = s.residual;
    row["certified"] = s.certified;
    row["core_lengths"] = s.core_lengths;
    rows.push_back(std::move(row));
  }
  j["sweep"] = std::move(rows);
  return j;
}

inline McgBoundReport mcg_report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("mcg report: not a JSON object");
  if (!j.contains("version") || j.at("version") != "mcg-bound-report/1")
    fail("mcg report: missing or unsupported version (want mcg-bound-report/1)");
  McgBoundReport r;
  r.status = j.at("status").get<std::string>();
  if (r.status != "verified" && r.status != "partial" && r.status != "failed")
    fail(cat("mcg report: bad status ", r.status));
  r.classes_at_most = j.at("classes_at_most").get<int>();
  r.orientation_reversing = j.at("orientation_reversing").get<bool>();
  r.min_abs_n = j.at("min_abs_n").get<i64>();
  r.assumptions = j.value("assumptions", std::vector<std::string>{});
  r.tool_version = j.value("tool_version", "");
  r.input_sha256 = j.value("input_sha256", "");
  r.tolerance = j.value("tolerance", 0.0);
  if (j.contains("n_range")) {
    auto nr = j.at("n_range");
    if (!nr.is_array() || nr.size() != 2) fail("mcg report: n_range must be [lo, hi]");
    r.n_lo = nr[0].get<i64>();
    r.n_hi = nr[1].get<i64>();
  }
  r.complete_volume = j.value("complete_volume", 0.0);
  r.aut_order = j.value("aut_order", 0);
  r.aut_reversing = j.value("aut_reversing", 0);
  r.canonicity = j.value("canonicity", "");
  r.diagnostics = j.value("diagnostics", "");
  for (const auto& row : j.value("sweep", nlohmann::json::array())) {
    McgSweepRow s;
    s.n = row.at("n").get<i64>();
    s.volume = row.at("volume").get<double>();
    s.residual = row.at("residual").get<double>();
    s.certified = row.at("certified").get<bool>();
    s.core_lengths = row.value("core_lengths", std::vector<double>{});
    r.sweep.push_back(std::move(s));
  }
  return r;
}

}  // namespace corkforge::hyp
