#include "yamabe/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace yamabe {

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  if (!(tol_converge >= 0.0)) throw std::invalid_argument("tol_converge must be non-negative");
  if (!(delta_collapse > 0.0 && delta_collapse < 1.0))
    throw std::invalid_argument("delta_collapse must be in (0, 1)");
  if (!(q_min > 0.0)) throw std::invalid_argument("q_min must be positive");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
}

std::string to_string(Termination::Kind kind) {
  switch (kind) {
    case Termination::Kind::Converged: return "Converged";
    case Termination::Kind::Collapsed: return "Collapsed";
    case Termination::Kind::DegeneratePinch: return "DegeneratePinch";
    case Termination::Kind::HorizonReached: return "HorizonReached";
  }
  return "unknown";
}

Eigen::VectorXd yamabe_rhs(const Complex& c, const Metric& r, double q_min) {
  const CurvatureField f = curvature_field(c, r, q_min);
  return -f.K.cwiseProduct(r);
}

namespace {

void require_admissible(const Metric& r) {
  for (int v = 0; v < r.size(); ++v)
    if (!(r[v] > 0.0)) {
      std::ostringstream os;
      os << "radius r[" << v << "] = " << r[v] << " is not positive";
      throw StepRejectedError(os.str(), -1, v, 0.0);
    }
}

Eigen::VectorXd stage_rhs(const Complex& c, const Metric& r, double q_min) {
  require_admissible(r);
  try {
    return yamabe_rhs(c, r, q_min);
  } catch (const DegenerateTetError& e) {
    throw StepRejectedError(e.what(), e.tet, -1, e.q);
  }
}

}  // namespace

FlowState make_flow_state(const Complex& c, const Metric& r, double t, double q_min) {
  FlowState s;
  s.t = t;
  s.r = r;
  s.field = curvature_field(c, r, q_min);
  s.min_q = std::numeric_limits<double>::infinity();
  for (const auto& tet : c.tets)
    s.min_q = std::min(s.min_q, normalized_q(Vec4(r[tet[0]], r[tet[1]], r[tet[2]], r[tet[3]])));
  s.min_ratio = r.minCoeff() / r.sum();
  s.log_radii = r.array().log();
  return s;
}

FlowState step_rk4(const Complex& c, const FlowState& state, double dt, double q_min) {
  if (dt < 0.0) throw std::invalid_argument("dt must be non-negative");
  const Metric& r = state.r;
  const Eigen::VectorXd k1 = stage_rhs(c, r, q_min);
  const Eigen::VectorXd k2 = stage_rhs(c, r + 0.5 * dt * k1, q_min);
  const Eigen::VectorXd k3 = stage_rhs(c, r + 0.5 * dt * k2, q_min);
  const Eigen::VectorXd k4 = stage_rhs(c, r + dt * k3, q_min);
  const Metric next = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  require_admissible(next);
  try {
    return make_flow_state(c, next, state.t + dt, q_min);
  } catch (const DegenerateTetError& e) {
    throw StepRejectedError(e.what(), e.tet, -1, e.q);
  }
}

std::optional<Termination> classify_termination(
    const std::vector<FlowState>& history, const FlowConfig& cfg,
    const std::optional<StepRejectedError>& exhausted_rejection) {
  if (history.empty()) throw std::invalid_argument("empty flow history");
  const FlowState& last = history.back();

  if (exhausted_rejection) {
    Termination t;
    t.kind = Termination::Kind::DegeneratePinch;
    t.tet = exhausted_rejection->tet;
    return t;
  }

  // collapse needs two consecutive sub-delta samples
  if (history.size() >= 2 && last.min_ratio < cfg.delta_collapse &&
      history[history.size() - 2].min_ratio < cfg.delta_collapse) {
    Termination t;
    t.kind = Termination::Kind::Collapsed;
    int v = 0;
    last.r.minCoeff(&v);
    t.vertex = v;
    return t;
  }

  if (last.field.spread < cfg.tol_converge) {
    Termination t;
    t.kind = Termination::Kind::Converged;
    t.k_inf = last.field.k;
    return t;
  }

  if (last.t >= cfg.t_max) {
    Termination t;
    t.kind = Termination::Kind::HorizonReached;
    return t;
  }
  return std::nullopt;
}

FlowReport run_flow(const Complex& c, const Metric& r0, const FlowConfig& cfg) {
  cfg.validate();
  if (r0.size() != c.n_vertices)
    throw std::invalid_argument("initial radii size does not match vertex count");
  for (int v = 0; v < r0.size(); ++v)
    if (!(r0[v] > 0.0)) throw std::invalid_argument("initial radii must be positive");

  FlowReport report;
  FlowState state = make_flow_state(c, r0, 0.0, cfg.q_min);  // throws on degenerate start
  const double total_radius = r0.sum();

  std::vector<FlowState> recent{state};
  report.samples.push_back(state);
  long steps_since_sample = 0;

  for (;;) {
    if (auto term = classify_termination(recent, cfg)) {
      report.termination = *term;
      break;
    }

    double dt_try = std::min(cfg.dt, cfg.t_max - state.t);
    std::optional<StepRejectedError> rejection;
    std::optional<FlowState> next;
    for (int halvings = 0;; ++halvings) {
      try {
        next = step_rk4(c, state, dt_try, cfg.q_min);
        break;
      } catch (const StepRejectedError& e) {
        ++report.steps_rejected;
        if (halvings >= cfg.max_halvings) {
          rejection = e;
          break;
        }
        dt_try *= 0.5;
      }
    }
    if (rejection) {
      report.termination = *classify_termination(recent, cfg, rejection);
      break;
    }

    state = std::move(*next);
    if (cfg.normalize) {
      Metric rescaled = state.r * (total_radius / state.r.sum());
      state = make_flow_state(c, rescaled, state.t, cfg.q_min);
    }
    ++report.steps_accepted;

    if (recent.size() == 2) recent.erase(recent.begin());
    recent.push_back(state);

    if (++steps_since_sample == cfg.sample_every) {
      report.samples.push_back(state);
      steps_since_sample = 0;
    }
  }

  if (report.samples.back().t != state.t) report.samples.push_back(state);
  report.t_final = state.t;
  report.k_final = state.field.k;
  return report;
}

}  // namespace yamabe
