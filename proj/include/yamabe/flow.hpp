#pragma once

#include <optional>
#include <string>
#include <vector>

#include "yamabe/curvature.hpp"

namespace yamabe {

struct FlowConfig {
  double dt = 1e-3;
  double t_max = 10.0;
  double tol_converge = 1e-8;    // curvature spread threshold
  double delta_collapse = 1e-6;  // minimum allowed r_i / sum r_j
  double q_min = kQMin;
  bool normalize = true;         // keep sum r_i constant
  int sample_every = 1;          // accepted steps between recorded samples
  int max_halvings = 40;
  unsigned long long seed = 0;   // randomized initial radii (CLI)

  void validate() const;
};

struct FlowState {
  double t = 0;
  Metric r;
  CurvatureField field;
  double min_q = 0;      // min normalized Q over tets
  double min_ratio = 0;  // min r_i / sum r_j
  Eigen::VectorXd log_radii;
};

// A trial RK4 step left the admissible region (non-positive radius or a
// tetrahedron with Q <= q_min).
struct StepRejectedError : std::runtime_error {
  StepRejectedError(const std::string& what_arg, int tet_index, int vertex_index, double q_value)
      : std::runtime_error(what_arg), tet(tet_index), vertex(vertex_index), q(q_value) {}
  int tet;     // offending tet, or -1
  int vertex;  // offending vertex, or -1
  double q;
};

struct Termination {
  enum class Kind { Converged, Collapsed, DegeneratePinch, HorizonReached };
  Kind kind = Kind::HorizonReached;
  double k_inf = 0;  // Converged
  int vertex = -1;   // Collapsed
  int tet = -1;      // DegeneratePinch
};

std::string to_string(Termination::Kind kind);

struct FlowReport {
  std::vector<FlowState> samples;
  Termination termination;
  double t_final = 0;
  double k_final = 0;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

// Right-hand side -K_i r_i of the flow.
Eigen::VectorXd yamabe_rhs(const Complex& c, const Metric& r, double q_min = kQMin);

// Curvature field and singularity monitors at a given metric.
FlowState make_flow_state(const Complex& c, const Metric& r, double t, double q_min = kQMin);

// One classical RK4 step. Throws StepRejectedError if any stage leaves the
// admissible region; never silently repairs.
FlowState step_rk4(const Complex& c, const FlowState& state, double dt,
                   double q_min = kQMin);

// Deterministic mapping from recent monitor history (last two entries are
// inspected) to a termination tag; empty when the run should continue.
// Precedence: DegeneratePinch > Collapsed > Converged > HorizonReached.
std::optional<Termination> classify_termination(
    const std::vector<FlowState>& history, const FlowConfig& cfg,
    const std::optional<StepRejectedError>& exhausted_rejection = std::nullopt);

FlowReport run_flow(const Complex& c, const Metric& r0, const FlowConfig& cfg);

}  // namespace yamabe
