#pragma once

#include <Eigen/Dense>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "yamabe/metric.hpp"

namespace yamabe::oracle {

// Central 5-point differences with one Richardson extrapolation level.
// The step is relative to the coordinate being probed and shrinks
// automatically if a probe point degenerates.
struct FdScheme {
  double relative_step = 1e-5;
  double step_floor = 1e-9;
  double q_min = kQMin;
};

// Finite-difference estimate of d alpha_vertex / d r_m for all m.
Vec4 fd_solid_angle_gradient(const Vec4& r, int vertex, const FdScheme& scheme = {});

// Volume from the six edge lengths via the Cayley-Menger determinant,
// ordering (l01, l02, l03, l12, l13, l23). A negative determinant returns
// a quiet NaN-free signal through the second member.
struct CayleyMenger {
  double volume;       // sqrt(det/288) when embeddable, 0 otherwise
  double determinant;  // sign is the degeneracy signal
  bool embeddable;
};
CayleyMenger cayley_menger_volume(const std::array<double, 6>& lengths);

// Explicit coordinates realizing the conformal tetrahedron: vertex 0 at the
// origin, 1 on the x axis, 2 in the xy plane, 3 with positive z.
std::array<Eigen::Vector3d, 4> embed_tetrahedron(const Vec4& r, double q_min = kQMin);

// Coordinate-geometry recomputations, independent of the closed forms.
double embedded_solid_angle(const std::array<Eigen::Vector3d, 4>& x, int vertex);
Eigen::Vector3d embedded_midsphere_center(const std::array<Eigen::Vector3d, 4>& x,
                                          const Vec4& r);
double embedded_signed_height(const std::array<Eigen::Vector3d, 4>& x, const Vec4& r,
                              int opposite);
double embedded_dual_area(const std::array<Eigen::Vector3d, 4>& x, const Vec4& r,
                          int a, int b);

// Residual of sum_m r_m d alpha_i / d r_m (analytic gradients).
double schlafli_residual(const Vec4& r, int vertex, double q_min = kQMin);

// max over pairs of |d alpha_i / d r_j - d alpha_j / d r_i|, analytic.
double hessian_symmetry_defect(const Vec4& r, double q_min = kQMin);

// |(d gamma_ijk / d r_j) r_j - r_ijk / l_ij| with the derivative taken by
// central differences of the law of cosines on the side lengths.
double fd_face_angle_check(double r_i, double r_j, double r_k);

// One row of the `check` report.
struct CheckResult {
  std::string test;
  int samples;
  double max_defect;
  double threshold;
  bool pass;
};

// Seeded sweep over random tets (radii log-uniform in [0.1, 10], draws with
// Q <= 1e-3 resampled) exercising every oracle against the analytic path.
std::vector<CheckResult> run_checks(int samples, unsigned long long seed);

// Random nondegenerate tet radii under the sweep distribution.
Vec4 random_tet(std::mt19937_64& rng);

}  // namespace yamabe::oracle
