#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "yamabe/io.hpp"

namespace {

using namespace yamabe;

Metric radii_from_spec(const std::string& spec, const Complex& c, unsigned long long seed) {
  if (spec == "ones") return Metric::Ones(c.n_vertices);
  if (spec.rfind("random:", 0) == 0) {
    const auto body = spec.substr(7);
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      throw ParseError("radii spec must be random:<lo>,<hi>");
    const double lo = std::stod(body.substr(0, comma));
    const double hi = std::stod(body.substr(comma + 1));
    if (!(lo > 0.0 && hi > lo)) throw ParseError("radii spec needs 0 < lo < hi");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    Metric r(c.n_vertices);
    for (int v = 0; v < c.n_vertices; ++v) r[v] = std::exp(u(rng));
    return r;
  }
  return io::read_radii_file(spec, c);
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw ParseError("cannot open output file: " + path);
  return file;
}

int cmd_validate(const std::string& facets_path, const std::string& out_path) {
  const Complex c = build_complex(read_facet_file(facets_path));
  const auto diag = validate_closed(c);
  std::ofstream file;
  std::ostream& out = open_or_stdout(file, out_path);
  if (diag.closed()) {
    out << "closed pseudomanifold, " << c.n_vertices << " vertices, " << c.edges.size()
        << " edges, " << c.triangles.size() << " triangles, " << c.tets.size()
        << " tets, d_max = " << c.d_max << "\n";
  } else {
    out << "not closed: " << diag.bad_triangles.size()
        << " triangles with tet incidence != 2\n";
    for (const auto& [tri, count] : diag.bad_triangles)
      out << "  {" << c.external_id[tri[0]] << "," << c.external_id[tri[1]] << ","
          << c.external_id[tri[2]] << "} in " << count << " tets\n";
  }
  return 0;
}

int cmd_curvature(const std::string& facets_path, const std::string& radii_spec,
                  const std::string& out_path, bool as_json, unsigned long long seed) {
  const Complex c = build_complex(read_facet_file(facets_path));
  if (!validate_closed(c).closed())
    std::cerr << "warning: complex is not closed; curvature deficits are conventional\n";
  const Metric r = radii_from_spec(radii_spec, c, seed);
  const CurvatureField f = curvature_field(c, r);
  std::ofstream file;
  std::ostream& out = open_or_stdout(file, out_path);
  if (as_json)
    out << io::curvature_json(c, f).dump(2) << "\n";
  else
    io::write_curvature_csv(out, c, f);
  return 0;
}

struct FlowCli {
  std::string facets, radii = "ones", config, out, summary;
  FlowConfig cfg;
};

int cmd_flow(const FlowCli& args) {
  const Complex c = build_complex(read_facet_file(args.facets));
  if (!validate_closed(c).closed())
    std::cerr << "warning: complex is not closed; curvature deficits are conventional\n";
  const Metric r0 = radii_from_spec(args.radii, c, args.cfg.seed);
  const FlowReport report = run_flow(c, r0, args.cfg);
  if (!args.out.empty()) {
    std::ofstream traj(args.out);
    if (!traj) throw ParseError("cannot open output file: " + args.out);
    io::write_trajectory_csv(traj, c, report);
  }
  std::ofstream file;
  std::ostream& out = open_or_stdout(file, args.summary);
  out << io::summary_json(c, report).dump(2) << "\n";
  return 0;  // any termination classification is success
}

int cmd_check(int samples, unsigned long long seed, const std::string& out_path) {
  const auto results = oracle::run_checks(samples, seed);
  std::ofstream file;
  std::ostream& out = open_or_stdout(file, out_path);
  out << io::check_report_json(results).dump(2) << "\n";
  bool all_pass = true;
  for (const auto& r : results) all_pass = all_pass && r.pass;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial Yamabe flow on sphere-packing metrics"};
  app.require_subcommand(1);

  std::string facets, radii = "ones", out, config, summary;
  bool as_json = false;
  int samples = 1000;
  unsigned long long seed = 42;

  auto* validate = app.add_subcommand("validate", "check closed-pseudomanifold structure");
  validate->add_option("--facets", facets, "facet file")->required();
  validate->add_option("--out", out, "output path (default stdout)");

  auto* curvature = app.add_subcommand("curvature", "per-vertex curvature report");
  curvature->add_option("--facets", facets, "facet file")->required();
  curvature->add_option("--radii", radii, "ones | random:<lo>,<hi> | path");
  curvature->add_option("--out", out, "output path (default stdout)");
  curvature->add_option("--seed", seed, "seed for random radii");
  curvature->add_flag("--json", as_json, "emit JSON instead of CSV");

  FlowCli flow_args;
  auto* flow = app.add_subcommand("flow", "integrate the flow");
  flow->add_option("--facets", flow_args.facets, "facet file")->required();
  flow->add_option("--radii", flow_args.radii, "ones | random:<lo>,<hi> | path");
  flow->add_option("--config", flow_args.config, "config JSON");
  flow->add_option("--out", flow_args.out, "trajectory CSV path");
  flow->add_option("--summary", flow_args.summary, "summary JSON path (default stdout)");
  auto* dt = flow->add_option("--dt", flow_args.cfg.dt, "initial step");
  auto* t_max = flow->add_option("--t-max", flow_args.cfg.t_max, "time horizon");
  auto* tol = flow->add_option("--tol-converge", flow_args.cfg.tol_converge,
                               "curvature spread threshold");
  auto* delta = flow->add_option("--delta-collapse", flow_args.cfg.delta_collapse,
                                 "minimum allowed r_i / sum r_j");
  auto* qmin = flow->add_option("--q-min", flow_args.cfg.q_min, "degeneracy floor");
  auto* sample = flow->add_option("--sample-every", flow_args.cfg.sample_every,
                                  "steps between samples");
  auto* halvings = flow->add_option("--max-halvings", flow_args.cfg.max_halvings,
                                    "step-halving cap");
  auto* seed_opt = flow->add_option("--seed", flow_args.cfg.seed, "seed for random radii");
  auto* norm = flow->add_flag("--normalize,!--no-normalize", flow_args.cfg.normalize,
                              "rescale to preserve sum of radii (default on)");

  auto* check = app.add_subcommand("check", "run the numerical oracle suite");
  check->add_option("--samples", samples, "random tets per sweep");
  check->add_option("--seed", seed, "sweep seed");
  check->add_option("--out", out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(facets, out);
    if (curvature->parsed()) return cmd_curvature(facets, radii, out, as_json, seed);
    if (flow->parsed()) {
      // flags override config-file values which override defaults
      FlowCli args = flow_args;
      if (!args.config.empty()) {
        const FlowConfig file_cfg = yamabe::io::read_config_file(args.config);
        FlowConfig merged = file_cfg;
        if (dt->count()) merged.dt = flow_args.cfg.dt;
        if (t_max->count()) merged.t_max = flow_args.cfg.t_max;
        if (tol->count()) merged.tol_converge = flow_args.cfg.tol_converge;
        if (delta->count()) merged.delta_collapse = flow_args.cfg.delta_collapse;
        if (qmin->count()) merged.q_min = flow_args.cfg.q_min;
        if (sample->count()) merged.sample_every = flow_args.cfg.sample_every;
        if (halvings->count()) merged.max_halvings = flow_args.cfg.max_halvings;
        if (seed_opt->count()) merged.seed = flow_args.cfg.seed;
        if (norm->count()) merged.normalize = flow_args.cfg.normalize;
        args.cfg = merged;
      }
      return cmd_flow(args);
    }
    if (check->parsed()) return cmd_check(samples, seed, out);
  } catch (const yamabe::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
