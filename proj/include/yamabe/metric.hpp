#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace yamabe {

using Vec4 = Eigen::Vector4d;

// Floor on the nondegeneracy quadratic Q, evaluated after rescaling the
// four radii to geometric mean 1.
inline constexpr double kQMin = 1e-12;

// Cosines of dihedral angles within this distance of +-1 are clamped;
// farther out the configuration is treated as degenerate.
inline constexpr double kCosClamp = 1e-9;

struct DegenerateTetError : std::runtime_error {
  explicit DegenerateTetError(double q_value, const std::string& what_arg)
      : std::runtime_error(what_arg), q(q_value) {}
  double q;     // normalized Q at the point of failure
  int tet = -1; // filled in by callers that know the tet index
};

struct FaceAngle {
  double cos_value;
  double sin_value;
  double angle;  // atan2(sin, cos), in (0, pi)
};

// Conformal edge length r_i + r_j.
double edge_length(double r_i, double r_j);

// Angle at the first vertex of the triangle with radii (r_i, r_j, r_k).
FaceAngle face_angle(double r_i, double r_j, double r_k);

double face_area(double r_i, double r_j, double r_k);       // Heron
double face_perimeter(double r_i, double r_j, double r_k);  // 2(r_i+r_j+r_k)
double face_inradius(double r_i, double r_j, double r_k);

// Q = (sum 1/r)^2 - 2 sum 1/r^2. Sign is the nondegeneracy diagnostic.
double nondegeneracy_q(const Vec4& r);

// Q after rescaling the radii to geometric mean 1 (scale invariant form).
double normalized_q(const Vec4& r);

// V = (1/3) r_i r_j r_k r_l sqrt(Q). Throws DegenerateTetError when Q < 0.
double tet_volume(const Vec4& r);

// Radius of the sphere tangent to all six edges: 2/sqrt(Q).
double midsphere_radius(const Vec4& r, double q_min = kQMin);

// Dihedral angle from the three face angles at a vertex, via the spherical
// law of cosines. g_ijk and g_ijl are the angles on the faces adjacent to
// the edge; g_ikl is the opposite one.
double dihedral_angle(double g_ijk, double g_ijl, double g_ikl);
double dihedral_angle(const FaceAngle& g_ijk, const FaceAngle& g_ijl, const FaceAngle& g_ikl);

// Solid angle at r[vertex], as the spherical excess of its three dihedral
// angles.
double solid_angle(const Vec4& r, int vertex, double q_min = kQMin);

// Signed distance from the midsphere center to the face opposite
// r[opposite]; negative when the center lies on the far side of the face.
double signed_height(const Vec4& r, int opposite, double q_min = kQMin);

// Signed area of the cut perpendicular to edge {a,b} through the midsphere
// center, decomposed as the two right triangles with the face inradii as
// legs.
double dual_area(const Vec4& r, int a, int b, double q_min = kQMin);

// Everything above for one tetrahedron, computed once. Local indices 0..3;
// faces are identified by their opposite vertex.
struct TetGeometry {
  Vec4 r;
  double q = 0;                 // raw Q
  double volume = 0;
  double midsphere = 0;
  double length[4][4] = {};     // edge {a,b}
  FaceAngle gamma[4][4] = {};   // angle at a in the face opposite d: gamma[a][d]
  double area[4] = {};          // face opposite d
  double perimeter[4] = {};
  double inradius[4] = {};
  double height[4] = {};        // signed height of face opposite d
  double dihedral[4][4] = {};   // edge {a,b}, symmetric
  double solid[4] = {};
  double dual[4][4] = {};       // edge {a,b}, symmetric, signed
  double omega[4][4] = {};      // (d alpha_a / d r_b) * r_b, a != b
};

TetGeometry tet_geometry(const Vec4& r, double q_min = kQMin);

}  // namespace yamabe
