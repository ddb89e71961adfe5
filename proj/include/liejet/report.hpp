#pragma once
// Uniform result reporting for the command line tool: a flat item list plus
// findings, rendered either as plain text or as key-sorted JSON.  Identical
// inputs yield byte-identical output in both modes.

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace liejet {

struct ReportItem {
  std::string name;
  std::string kind;
  std::vector<std::string> residuals;
  std::string verdict;
};

struct Report {
  std::string command;
  bool pass = true;
  std::vector<ReportItem> items;
  std::vector<std::string> findings;
  std::optional<std::vector<int>> dimension_set;  // classify only
  std::string text;                               // plain-text rendering
};

inline nlohmann::json report_json(const Report& r) {
  nlohmann::json j;
  j["command"] = r.command;
  j["status"] = r.pass ? "pass" : "fail";
  nlohmann::json items = nlohmann::json::array();
  for (const ReportItem& it : r.items) {
    nlohmann::json o;
    o["name"] = it.name;
    o["kind"] = it.kind;
    o["residuals"] = it.residuals;
    o["verdict"] = it.verdict;
    items.push_back(std::move(o));
  }
  j["items"] = std::move(items);
  j["findings"] = r.findings;
  if (r.dimension_set) j["dimension_set"] = *r.dimension_set;
  return j;
}

inline std::string render_report(const Report& r, bool as_json) {
  if (as_json) return report_json(r).dump(2) + "\n";
  std::string out = r.text;
  if (!out.empty() && out.back() != '\n') out += '\n';
  if (!r.findings.empty()) {
    out += "findings:\n";
    for (const std::string& f : r.findings) out += "  " + f + "\n";
  }
  return out;
}

}  // namespace liejet
