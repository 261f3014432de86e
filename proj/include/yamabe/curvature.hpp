#pragma once

#include <Eigen/Dense>

#include "yamabe/complex.hpp"
#include "yamabe/metric.hpp"

namespace yamabe {

// A metric structure on a complex: one positive radius per internal vertex.
using Metric = Eigen::VectorXd;

struct CurvatureField {
  Eigen::VectorXd K;   // solid-angle deficit per vertex
  double k = 0;        // average curvature, sum K_i r_i / sum r_i
  double T = 0;        // total functional, sum K_i r_i
  double spread = 0;   // max K - min K
};

// Analytic gradient of the solid angle at r[vertex] with respect to all
// four radii. Entry m is d alpha_vertex / d r_m.
Vec4 solid_angle_gradient(const Vec4& r, int vertex, double q_min = kQMin);

// Omega coefficient (d alpha_i / d r_j) * r_j for ordered pair (i, j).
double omega(const Vec4& r, int i, int j, double q_min = kQMin);

// K_i = 4 pi minus the solid angles at v over all incident tets.
double vertex_curvature(const Complex& c, const Metric& r, int v, double q_min = kQMin);

CurvatureField curvature_field(const Complex& c, const Metric& r, double q_min = kQMin);

double total_functional(const CurvatureField& field, const Metric& r);
double average_curvature(const CurvatureField& field, const Metric& r);

// (Delta f)_i assembled tet by tet from the Omega coefficients.
Eigen::VectorXd laplacian(const Complex& c, const Metric& r, const Eigen::VectorXd& f,
                          double q_min = kQMin);

// Signed dual area of an edge: sum of per-tet dual areas over the tets
// incident on it.
double dual_edge_area(const Complex& c, const Metric& r, int edge_index,
                      double q_min = kQMin);

// Solid angle of the regular conformal tetrahedron, 3 acos(1/3) - pi.
double regular_solid_angle();

// Vertex degree at which a vertex-transitive all-ones metric would be flat:
// 4 pi / (3 acos(1/3) - pi), about 22.795. Not an integer, so no
// vertex-transitive triangulation is flat.
double flat_degree_threshold();

}  // namespace yamabe
