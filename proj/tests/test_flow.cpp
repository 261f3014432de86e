#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "yamabe/flow.hpp"

using namespace yamabe;
using doctest::Approx;

namespace {

Complex five_cell() {
  return build_complex(parse_facet_list(std::string("1 2 3 4\n1 2 3 5\n1 2 4 5\n1 3 4 5\n2 3 4 5\n")));
}

const double kRegularK = 4.0 * M_PI - 4.0 * (3.0 * std::acos(1.0 / 3.0) - M_PI);
const double kPinchRho = 1.0 / (3.0 + 2.0 * std::sqrt(3.0));

}  // namespace

TEST_CASE("rhs is -K r") {
  const Complex c = five_cell();
  const Metric ones = Metric::Ones(5);
  const Eigen::VectorXd rhs = yamabe_rhs(c, ones);
  for (int v = 0; v < 5; ++v) CHECK(rhs[v] == Approx(-kRegularK).epsilon(1e-13));
}

TEST_CASE("flow state monitors") {
  const Complex c = five_cell();
  const FlowState s = make_flow_state(c, Metric::Ones(5), 0.25);
  CHECK(s.t == 0.25);
  CHECK(s.min_ratio == Approx(0.2).epsilon(1e-14));
  CHECK(s.min_q == Approx(normalized_q(Vec4(1, 1, 1, 1))).epsilon(1e-14));
  CHECK(s.field.spread <= 1e-13);
}

TEST_CASE("rk4 step matches the exact exponential on a transitive metric") {
  // at equal radii K stays constant along the ray, so r(t) = e^{-K t} r0 and
  // one RK4 step should match to O(dt^5)
  const Complex c = five_cell();
  const FlowState s0 = make_flow_state(c, Metric::Ones(5), 0.0);
  const double dt = 1e-3;
  const FlowState s1 = step_rk4(c, s0, dt);
  CHECK(s1.t == Approx(dt).epsilon(1e-15));
  const double exact = std::exp(-kRegularK * dt);
  for (int v = 0; v < 5; ++v) CHECK(s1.r[v] == Approx(exact).epsilon(1e-12));
}

TEST_CASE("zero step is the identity") {
  const Complex c = five_cell();
  const FlowState s0 = make_flow_state(c, Metric::Ones(5), 0.0);
  const FlowState s1 = step_rk4(c, s0, 0.0);
  CHECK((s1.r - s0.r).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("steps into the degenerate region are rejected, not repaired") {
  const Complex c = build_complex(parse_facet_list(std::string("[[1,2,3,4]]")));
  Metric r = Metric::Ones(4);
  r[3] = kPinchRho + 1e-3;  // barely admissible
  const FlowState s0 = make_flow_state(c, r, 0.0);
  CHECK(s0.min_q > 0.0);
  CHECK_THROWS_AS(step_rk4(c, s0, 5.0), StepRejectedError);
  try {
    step_rk4(c, s0, 5.0);
  } catch (const StepRejectedError& e) {
    CHECK((e.tet == 0 || e.vertex >= 0));
  }
}

TEST_CASE("normalized run from the fixed point converges immediately") {
  const Complex c = five_cell();
  FlowConfig cfg;
  const FlowReport rep = run_flow(c, Metric::Ones(5), cfg);
  CHECK(rep.termination.kind == Termination::Kind::Converged);
  CHECK(rep.t_final == 0.0);
  CHECK(rep.steps_accepted == 0);
  CHECK(rep.k_final == Approx(kRegularK).epsilon(1e-13));
  CHECK(rep.termination.k_inf == Approx(kRegularK).epsilon(1e-13));
}

TEST_CASE("unnormalized transitive flow follows e^{-k t} and keeps K constant") {
  const Complex c = five_cell();
  FlowConfig cfg;
  cfg.normalize = false;
  cfg.tol_converge = 0.0;  // disable convergence so the horizon is reached
  cfg.t_max = 0.1;
  const FlowReport rep = run_flow(c, Metric::Ones(5), cfg);
  CHECK(rep.termination.kind == Termination::Kind::HorizonReached);
  CHECK(rep.t_final == Approx(0.1).epsilon(1e-14));
  for (const FlowState& s : rep.samples) {
    const double exact = std::exp(-kRegularK * s.t);
    for (int v = 0; v < 5; ++v) CHECK(s.r[v] == Approx(exact).epsilon(1e-8));
    for (int v = 0; v < 5; ++v) CHECK(s.field.K[v] == Approx(kRegularK).epsilon(1e-8));
  }
}

TEST_CASE("perturbed 5-cell metrics converge to constant curvature") {
  const Complex c = five_cell();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  for (int trial = 0; trial < 3; ++trial) {
    Metric r0(5);
    for (int v = 0; v < 5; ++v) r0[v] = u(rng);
    FlowConfig cfg;
    cfg.t_max = 50.0;
    const FlowReport rep = run_flow(c, r0, cfg);
    REQUIRE(rep.termination.kind == Termination::Kind::Converged);
    CHECK(rep.samples.back().field.spread < cfg.tol_converge);
    CHECK(rep.k_final == Approx(kRegularK).epsilon(1e-6));

    // normalization keeps the total radius fixed
    const double sum0 = r0.sum();
    for (const FlowState& s : rep.samples)
      CHECK(s.r.sum() == Approx(sum0).epsilon(1e-12));

    // k decreases monotonically along the samples (up to roundoff)
    for (size_t i = 1; i < rep.samples.size(); ++i)
      CHECK(rep.samples[i].field.k <= rep.samples[i - 1].field.k + 1e-9);
  }
}

TEST_CASE("termination classification precedence") {
  const Complex c = five_cell();
  FlowConfig cfg;
  cfg.t_max = 10.0;

  FlowState ok = make_flow_state(c, Metric::Ones(5), 1.0);

  SUBCASE("continue when nothing triggers") {
    FlowState mid = ok;
    mid.field.spread = 1.0;  // pretend far from constant
    CHECK(!classify_termination({mid}, cfg).has_value());
  }

  SUBCASE("converged reports k") {
    const auto t = classify_termination({ok}, cfg);
    REQUIRE(t.has_value());
    CHECK(t->kind == Termination::Kind::Converged);
    CHECK(t->k_inf == Approx(kRegularK).epsilon(1e-13));
  }

  SUBCASE("collapse requires two consecutive samples below delta") {
    FlowState low = ok;
    low.field.spread = 1.0;
    low.min_ratio = 1e-9;
    CHECK(!classify_termination({ok, low}, cfg).has_value());
    Metric r = Metric::Ones(5);
    r[2] = 1e-9;
    FlowState low2 = low;
    low2.r = r;
    const auto t = classify_termination({low, low2}, cfg);
    REQUIRE(t.has_value());
    CHECK(t->kind == Termination::Kind::Collapsed);
    CHECK(t->vertex == 2);
  }

  SUBCASE("collapse outranks convergence") {
    FlowState low = ok;
    low.min_ratio = 1e-9;
    const auto t = classify_termination({low, low}, cfg);
    REQUIRE(t.has_value());
    CHECK(t->kind == Termination::Kind::Collapsed);
  }

  SUBCASE("an exhausted rejection outranks everything") {
    FlowState low = ok;
    low.min_ratio = 1e-9;
    StepRejectedError rej("trial step degenerate", 3, -1, -1e-4);
    const auto t = classify_termination({low, low}, cfg, rej);
    REQUIRE(t.has_value());
    CHECK(t->kind == Termination::Kind::DegeneratePinch);
    CHECK(t->tet == 3);
  }

  SUBCASE("horizon") {
    FlowState late = ok;
    late.field.spread = 1.0;
    late.t = 10.0;
    const auto t = classify_termination({late}, cfg);
    REQUIRE(t.has_value());
    CHECK(t->kind == Termination::Kind::HorizonReached);
  }
}

TEST_CASE("pinch on a single tet with coarse steps") {
  // with dt = 1 every trial step overshoots the degenerate boundary, and a
  // small halving budget exhausts before the step becomes admissible
  const Complex c = build_complex(parse_facet_list(std::string("[[1,2,3,4]]")));
  Metric r0(4);
  r0 << 1.0, 1.0, 1.0, 0.16;
  FlowConfig cfg;
  cfg.dt = 1.0;
  cfg.max_halvings = 3;
  cfg.normalize = false;
  const FlowReport rep = run_flow(c, r0, cfg);
  CHECK(rep.termination.kind == Termination::Kind::DegeneratePinch);
  CHECK(rep.termination.tet == 0);
  CHECK(rep.steps_rejected > 0);
}

TEST_CASE("halving dt shrinks the trajectory difference at fourth order") {
  const Complex c = five_cell();
  Metric r0(5);
  r0 << 1.1, 0.95, 1.0, 1.05, 0.9;
  FlowConfig a;
  a.tol_converge = 0.0;
  a.t_max = 0.2;
  a.dt = 1e-2;
  FlowConfig b = a;
  b.dt = 5e-3;
  b.sample_every = 2;
  FlowConfig d = a;
  d.dt = 2.5e-3;
  d.sample_every = 4;
  const FlowReport ra = run_flow(c, r0, a);
  const FlowReport rb = run_flow(c, r0, b);
  const FlowReport rd = run_flow(c, r0, d);
  REQUIRE(ra.samples.size() == rb.samples.size());
  REQUIRE(ra.samples.size() == rd.samples.size());
  double diff_ab = 0.0, diff_bd = 0.0;
  for (size_t i = 0; i < ra.samples.size(); ++i) {
    CHECK(ra.samples[i].t == Approx(rb.samples[i].t).epsilon(1e-12));
    diff_ab = std::max(diff_ab, (ra.samples[i].r - rb.samples[i].r).cwiseAbs().maxCoeff());
    diff_bd = std::max(diff_bd, (rb.samples[i].r - rd.samples[i].r).cwiseAbs().maxCoeff());
  }
  CHECK(diff_ab <= 1e-6);
  // classical RK4: halving dt divides the truncation error by about 16
  CHECK(diff_bd <= diff_ab / 10.0);
}

TEST_CASE("curvature trajectories are invariant under metric scaling") {
  const Complex c = five_cell();
  Metric r0(5);
  r0 << 1.1, 0.95, 1.0, 1.05, 0.9;
  FlowConfig cfg;
  cfg.tol_converge = 0.0;
  cfg.t_max = 0.5;
  cfg.dt = 1e-2;
  cfg.normalize = false;
  const FlowReport base = run_flow(c, r0, cfg);
  for (double lambda : {0.1, 10.0}) {
    const FlowReport scaled = run_flow(c, Metric(lambda * r0), cfg);
    REQUIRE(scaled.samples.size() == base.samples.size());
    for (size_t i = 0; i < base.samples.size(); ++i) {
      CHECK(scaled.samples[i].t == Approx(base.samples[i].t).epsilon(1e-12));
      CHECK((scaled.samples[i].field.K - base.samples[i].field.K).cwiseAbs().maxCoeff() <=
            1e-9);
      CHECK((scaled.samples[i].r - lambda * base.samples[i].r).cwiseAbs().maxCoeff() <=
            1e-9 * lambda);
    }
  }
}

TEST_CASE("config validation") {
  FlowConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FlowConfig{};
  cfg.t_max = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FlowConfig{};
  cfg.sample_every = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FlowConfig{};
  cfg.delta_collapse = -0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("termination kinds render stable names") {
  CHECK(to_string(Termination::Kind::Converged) == "Converged");
  CHECK(to_string(Termination::Kind::Collapsed) == "Collapsed");
  CHECK(to_string(Termination::Kind::DegeneratePinch) == "DegeneratePinch");
  CHECK(to_string(Termination::Kind::HorizonReached) == "HorizonReached");
}
