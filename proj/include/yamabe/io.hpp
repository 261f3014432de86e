#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "yamabe/flow.hpp"
#include "yamabe/oracle.hpp"

namespace yamabe::io {

// Decimal with 17 significant digits; round-trips doubles exactly.
std::string format_real(double x);

// Radii files: either lines "vertex_id value" (external 1-based ids,
// '#' comments allowed) or a JSON array in dense vertex order.
Metric read_radii(const std::string& text, const Complex& c);
Metric read_radii_file(const std::string& path, const Complex& c);
void write_radii(std::ostream& out, const Complex& c, const Metric& r);

// Curvature report: CSV "vertex,K" with footer rows "k,<value>" and
// "T,<value>", or the JSON equivalent with the same keys.
void write_curvature_csv(std::ostream& out, const Complex& c, const CurvatureField& f);
nlohmann::json curvature_json(const Complex& c, const CurvatureField& f);

FlowConfig config_from_json(const nlohmann::json& j);
FlowConfig read_config_file(const std::string& path);

void write_trajectory_csv(std::ostream& out, const Complex& c, const FlowReport& report);
nlohmann::json summary_json(const Complex& c, const FlowReport& report);

nlohmann::json check_report_json(const std::vector<oracle::CheckResult>& results);

}  // namespace yamabe::io
