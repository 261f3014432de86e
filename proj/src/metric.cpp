#include "yamabe/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "yamabe/curvature.hpp"

namespace yamabe {

namespace {

void require_positive(double r, const char* name) {
  if (!(r > 0.0)) {
    std::ostringstream os;
    os << "non-positive radius " << name << " = " << r;
    throw std::invalid_argument(os.str());
  }
}

void require_positive4(const Vec4& r) {
  for (int a = 0; a < 4; ++a)
    if (!(r[a] > 0.0)) {
      std::ostringstream os;
      os << "non-positive radius r[" << a << "] = " << r[a];
      throw std::invalid_argument(os.str());
    }
}

}  // namespace

namespace detail {

// Geometric mean of the four radii; per-tet computations are done at
// geometric mean 1 and rescaled back by homogeneity.
double geometric_mean(const Vec4& r) {
  return std::exp(0.25 * r.array().log().sum());
}

}  // namespace detail

double edge_length(double r_i, double r_j) {
  require_positive(r_i, "r_i");
  require_positive(r_j, "r_j");
  return r_i + r_j;
}

FaceAngle face_angle(double r_i, double r_j, double r_k) {
  require_positive(r_i, "r_i");
  require_positive(r_j, "r_j");
  require_positive(r_k, "r_k");
  const double denom = (r_i + r_j) * (r_i + r_k);
  FaceAngle g;
  g.cos_value = (r_i * r_i + r_i * r_j + r_i * r_k - r_j * r_k) / denom;
  g.sin_value = 2.0 * std::sqrt(r_i * r_j * r_k * (r_i + r_j + r_k)) / denom;
  g.angle = std::atan2(g.sin_value, g.cos_value);
  return g;
}

double face_area(double r_i, double r_j, double r_k) {
  require_positive(r_i, "r_i");
  require_positive(r_j, "r_j");
  require_positive(r_k, "r_k");
  return std::sqrt(r_i * r_j * r_k * (r_i + r_j + r_k));
}

double face_perimeter(double r_i, double r_j, double r_k) {
  return 2.0 * (r_i + r_j + r_k);
}

double face_inradius(double r_i, double r_j, double r_k) {
  require_positive(r_i, "r_i");
  require_positive(r_j, "r_j");
  require_positive(r_k, "r_k");
  return std::sqrt(r_i * r_j * r_k / (r_i + r_j + r_k));
}

double nondegeneracy_q(const Vec4& r) {
  require_positive4(r);
  const Vec4 s = r.cwiseInverse();
  const double sum = s.sum();
  return sum * sum - 2.0 * s.squaredNorm();
}

double normalized_q(const Vec4& r) {
  require_positive4(r);
  return nondegeneracy_q(Vec4(r / detail::geometric_mean(r)));
}

double tet_volume(const Vec4& r) {
  require_positive4(r);
  const double g = detail::geometric_mean(r);
  const double qh = nondegeneracy_q(Vec4(r / g));
  if (qh < 0.0)
    throw DegenerateTetError(qh, "degenerate tetrahedron: Q < 0");
  // product of normalized radii is 1
  return g * g * g * std::sqrt(qh) / 3.0;
}

double midsphere_radius(const Vec4& r, double q_min) {
  require_positive4(r);
  const double g = detail::geometric_mean(r);
  const double qh = nondegeneracy_q(Vec4(r / g));
  if (qh <= q_min)
    throw DegenerateTetError(qh, "degenerate tetrahedron: Q <= q_min");
  return g * 2.0 / std::sqrt(qh);
}

double dihedral_angle(const FaceAngle& g_ijk, const FaceAngle& g_ijl, const FaceAngle& g_ikl) {
  const double denom = g_ijk.sin_value * g_ijl.sin_value;
  if (!(denom > 0.0))
    throw DegenerateTetError(std::numeric_limits<double>::quiet_NaN(),
                             "degenerate face angle in dihedral computation");
  double c = (g_ikl.cos_value - g_ijk.cos_value * g_ijl.cos_value) / denom;
  if (c > 1.0) {
    if (c > 1.0 + kCosClamp)
      throw DegenerateTetError(std::numeric_limits<double>::quiet_NaN(),
                               "spherical triangle inequality violated (cos > 1)");
    c = 1.0;
  } else if (c < -1.0) {
    if (c < -1.0 - kCosClamp)
      throw DegenerateTetError(std::numeric_limits<double>::quiet_NaN(),
                               "spherical triangle inequality violated (cos < -1)");
    c = -1.0;
  }
  return std::acos(c);
}

double dihedral_angle(double g_ijk, double g_ijl, double g_ikl) {
  auto fa = [](double a) {
    return FaceAngle{std::cos(a), std::sin(a), a};
  };
  return dihedral_angle(fa(g_ijk), fa(g_ijl), fa(g_ikl));
}

double solid_angle(const Vec4& r, int vertex, double q_min) {
  require_positive4(r);
  const double qh = normalized_q(r);
  if (qh <= q_min)
    throw DegenerateTetError(qh, "degenerate tetrahedron: Q <= q_min");
  int o[3], p = 0;
  for (int a = 0; a < 4; ++a)
    if (a != vertex) o[p++] = a;
  // gamma[m] is the face angle at `vertex` in the face omitting o[m]
  FaceAngle gam[3];
  gam[0] = face_angle(r[vertex], r[o[1]], r[o[2]]);
  gam[1] = face_angle(r[vertex], r[o[0]], r[o[2]]);
  gam[2] = face_angle(r[vertex], r[o[0]], r[o[1]]);
  // dihedral along edge {vertex, o[m]}: adjacent faces omit the other two
  const double b0 = dihedral_angle(gam[2], gam[1], gam[0]);
  const double b1 = dihedral_angle(gam[2], gam[0], gam[1]);
  const double b2 = dihedral_angle(gam[1], gam[0], gam[2]);
  return b0 + b1 + b2 - M_PI;
}

double signed_height(const Vec4& r, int opposite, double q_min) {
  require_positive4(r);
  const double g = detail::geometric_mean(r);
  const Vec4 rh = r / g;
  const double qh = nondegeneracy_q(rh);
  if (qh <= q_min)
    throw DegenerateTetError(qh, "degenerate tetrahedron: Q <= q_min");
  const double rmid = 2.0 / std::sqrt(qh);
  int f[3], p = 0;
  for (int a = 0; a < 4; ++a)
    if (a != opposite) f[p++] = a;
  const double rin = face_inradius(rh[f[0]], rh[f[1]], rh[f[2]]);
  const double bracket =
      1.0 / rh[f[0]] + 1.0 / rh[f[1]] + 1.0 / rh[f[2]] - 1.0 / rh[opposite];
  return g * 0.5 * rmid * rin * bracket;
}

double dual_area(const Vec4& r, int a, int b, double q_min) {
  require_positive4(r);
  int o[2], p = 0;
  for (int m = 0; m < 4; ++m)
    if (m != a && m != b) o[p++] = m;
  const double g = detail::geometric_mean(r);
  const Vec4 rh = r / g;
  // face {a,b,o0} is opposite o1 and vice versa
  const double h0 = signed_height(rh, o[1], q_min);
  const double h1 = signed_height(rh, o[0], q_min);
  const double rin0 = face_inradius(rh[a], rh[b], rh[o[0]]);
  const double rin1 = face_inradius(rh[a], rh[b], rh[o[1]]);
  return g * g * (0.5 * h0 * rin0 + 0.5 * h1 * rin1);
}

TetGeometry tet_geometry(const Vec4& r, double q_min) {
  require_positive4(r);
  TetGeometry t;
  t.r = r;
  t.q = nondegeneracy_q(r);
  const double qh = normalized_q(r);
  if (qh <= q_min)
    throw DegenerateTetError(qh, "degenerate tetrahedron: Q <= q_min");
  t.volume = tet_volume(r);
  t.midsphere = midsphere_radius(r, q_min);

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) t.length[a][b] = r[a] + r[b];

  for (int d = 0; d < 4; ++d) {
    int f[3], p = 0;
    for (int a = 0; a < 4; ++a)
      if (a != d) f[p++] = a;
    t.area[d] = face_area(r[f[0]], r[f[1]], r[f[2]]);
    t.perimeter[d] = face_perimeter(r[f[0]], r[f[1]], r[f[2]]);
    t.inradius[d] = face_inradius(r[f[0]], r[f[1]], r[f[2]]);
    t.height[d] = signed_height(r, d, q_min);
    for (int a : f) {
      int other[2], q = 0;
      for (int b : f)
        if (b != a) other[q++] = b;
      t.gamma[a][d] = face_angle(r[a], r[other[0]], r[other[1]]);
    }
  }

  for (int a = 0; a < 4; ++a) {
    int o[3], p = 0;
    for (int b = 0; b < 4; ++b)
      if (b != a) o[p++] = b;
    // dihedral along edge {a, o[m]} from the face angles at a
    const double b0 = dihedral_angle(t.gamma[a][o[2]], t.gamma[a][o[1]], t.gamma[a][o[0]]);
    const double b1 = dihedral_angle(t.gamma[a][o[2]], t.gamma[a][o[0]], t.gamma[a][o[1]]);
    const double b2 = dihedral_angle(t.gamma[a][o[1]], t.gamma[a][o[0]], t.gamma[a][o[2]]);
    t.dihedral[a][o[0]] = b0;
    t.dihedral[a][o[1]] = b1;
    t.dihedral[a][o[2]] = b2;
    t.solid[a] = b0 + b1 + b2 - M_PI;
  }

  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      t.dual[a][b] = dual_area(r, a, b, q_min);
      t.dual[b][a] = t.dual[a][b];
    }

  for (int a = 0; a < 4; ++a) {
    const Vec4 grad = solid_angle_gradient(r, a, q_min);
    for (int b = 0; b < 4; ++b)
      if (b != a) t.omega[a][b] = grad[b] * r[b];
  }
  return t;
}

}  // namespace yamabe
