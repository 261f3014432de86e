#include "yamabe/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace yamabe::io {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Metric read_radii(const std::string& text, const Complex& c) {
  size_t i = 0;
  while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '#')) {
    if (text[i] == '#')
      while (i < text.size() && text[i] != '\n') ++i;
    else
      ++i;
  }
  Metric r = Metric::Constant(c.n_vertices, -1.0);
  if (i < text.size() && text[i] == '[') {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array() || static_cast<int>(j.size()) != c.n_vertices)
      throw ParseError("radii JSON array must have one entry per vertex");
    for (int v = 0; v < c.n_vertices; ++v) r[v] = j[v].get<double>();
  } else {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      int ext = 0;
      double value = 0;
      if (!(ls >> ext)) continue;
      if (!(ls >> value)) throw ParseError("malformed radii line: " + line);
      auto it = c.internal_id.find(ext);
      if (it == c.internal_id.end())
        throw ParseError("radii file names unknown vertex " + std::to_string(ext));
      r[it->second] = value;
    }
  }
  for (int v = 0; v < c.n_vertices; ++v)
    if (!(r[v] > 0.0))
      throw ParseError("missing or non-positive radius for vertex " +
                       std::to_string(c.external_id[v]));
  return r;
}

Metric read_radii_file(const std::string& path, const Complex& c) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open radii file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_radii(buf.str(), c);
}

void write_radii(std::ostream& out, const Complex& c, const Metric& r) {
  for (int v = 0; v < c.n_vertices; ++v)
    out << c.external_id[v] << ' ' << format_real(r[v]) << '\n';
}

void write_curvature_csv(std::ostream& out, const Complex& c, const CurvatureField& f) {
  out << "vertex,K\n";
  for (int v = 0; v < c.n_vertices; ++v)
    out << c.external_id[v] << ',' << format_real(f.K[v]) << '\n';
  out << "k," << format_real(f.k) << '\n';
  out << "T," << format_real(f.T) << '\n';
}

nlohmann::json curvature_json(const Complex& c, const CurvatureField& f) {
  nlohmann::json per_vertex = nlohmann::json::array();
  for (int v = 0; v < c.n_vertices; ++v)
    per_vertex.push_back({{"vertex", c.external_id[v]}, {"K", f.K[v]}});
  return {{"vertex_curvatures", per_vertex}, {"k", f.k}, {"T", f.T}};
}

FlowConfig config_from_json(const nlohmann::json& j) {
  FlowConfig cfg;
  if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
  if (j.contains("t_max")) cfg.t_max = j["t_max"].get<double>();
  if (j.contains("normalize")) cfg.normalize = j["normalize"].get<bool>();
  if (j.contains("tol_converge")) cfg.tol_converge = j["tol_converge"].get<double>();
  if (j.contains("delta_collapse")) cfg.delta_collapse = j["delta_collapse"].get<double>();
  if (j.contains("q_min")) cfg.q_min = j["q_min"].get<double>();
  if (j.contains("sample_every")) cfg.sample_every = j["sample_every"].get<int>();
  if (j.contains("max_halvings")) cfg.max_halvings = j["max_halvings"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long long>();
  return cfg;
}

FlowConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

void write_trajectory_csv(std::ostream& out, const Complex& c, const FlowReport& report) {
  out << "t";
  for (int v = 0; v < c.n_vertices; ++v) out << ",r_" << c.external_id[v];
  for (int v = 0; v < c.n_vertices; ++v) out << ",K_" << c.external_id[v];
  out << ",k,T,spread,minQ,minRatio\n";
  for (const FlowState& s : report.samples) {
    out << format_real(s.t);
    for (int v = 0; v < c.n_vertices; ++v) out << ',' << format_real(s.r[v]);
    for (int v = 0; v < c.n_vertices; ++v) out << ',' << format_real(s.field.K[v]);
    out << ',' << format_real(s.field.k) << ',' << format_real(s.field.T) << ','
        << format_real(s.field.spread) << ',' << format_real(s.min_q) << ','
        << format_real(s.min_ratio) << '\n';
  }
}

nlohmann::json summary_json(const Complex& c, const FlowReport& report) {
  nlohmann::json j{{"termination", to_string(report.termination.kind)},
                   {"t_final", report.t_final},
                   {"k_final", report.k_final},
                   {"steps_accepted", report.steps_accepted},
                   {"steps_rejected", report.steps_rejected}};
  if (report.termination.kind == Termination::Kind::Collapsed)
    j["vertex"] = c.external_id[report.termination.vertex];
  if (report.termination.kind == Termination::Kind::DegeneratePinch &&
      report.termination.tet >= 0)
    j["tet"] = report.termination.tet;
  return j;
}

nlohmann::json check_report_json(const std::vector<oracle::CheckResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results)
    arr.push_back({{"test", r.test},
                   {"samples", r.samples},
                   {"max_defect", r.max_defect},
                   {"threshold", r.threshold},
                   {"pass", r.pass}});
  return arr;
}

}  // namespace yamabe::io
