#include "yamabe/curvature.hpp"

#include <cmath>
#include <sstream>

namespace yamabe {

namespace detail {
double geometric_mean(const Vec4& r);
}

Vec4 solid_angle_gradient(const Vec4& r, int vertex, double q_min) {
  const double g = detail::geometric_mean(r);
  const Vec4 rh = r / g;
  const double q = nondegeneracy_q(rh);
  if (q <= q_min)
    throw DegenerateTetError(q, "degenerate tetrahedron: Q <= q_min");
  const Vec4 s = rh.cwiseInverse();
  const double vol = std::sqrt(q) / 3.0;  // product of normalized radii is 1

  const int i = vertex;
  int o[3], p = 0;
  for (int a = 0; a < 4; ++a)
    if (a != i) o[p++] = a;
  const int j = o[0], k = o[1], l = o[2];

  auto P = [&](int a, int b, int c) { return 2.0 * (rh[a] + rh[b] + rh[c]); };

  Vec4 grad;

  // d alpha_i / d r_i
  {
    const double pref = -8.0 * rh[j] * rh[j] * rh[k] * rh[k] * rh[l] * rh[l] /
                        (3.0 * P(i, j, k) * P(i, j, l) * P(i, k, l) * vol);
    const double bracket = (2.0 * s[i] + s[j] + s[k] + s[l]) +
                           rh[j] / rh[i] * (s[i] + s[k] + s[l]) +
                           rh[k] / rh[i] * (s[i] + s[j] + s[l]) +
                           rh[l] / rh[i] * (s[i] + s[j] + s[k]) +
                           (2.0 * rh[i] + rh[j] + rh[k] + rh[l]) * q;
    grad[i] = pref * bracket;
  }

  // d alpha_i / d r_m for the other vertices; the remaining two play k, l
  for (int m = 0; m < 3; ++m) {
    const int jj = o[m];
    const int kk = o[(m + 1) % 3];
    const int ll = o[(m + 2) % 3];
    const double pref = 4.0 * rh[i] * rh[jj] * rh[kk] * rh[kk] * rh[ll] * rh[ll] /
                        (3.0 * P(i, jj, kk) * P(i, jj, ll) * vol);
    const double diff = s[kk] - s[ll];
    const double bracket = s[i] * (s[jj] + s[kk] + s[ll]) +
                           s[jj] * (s[i] + s[kk] + s[ll]) - diff * diff;
    grad[jj] = pref * bracket;
  }

  return grad / g;  // d alpha / d r is homogeneous of degree -1
}

double omega(const Vec4& r, int i, int j, double q_min) {
  return solid_angle_gradient(r, i, q_min)[j] * r[j];
}

namespace {

Vec4 tet_radii(const Metric& r, const std::array<int, 4>& tet) {
  return Vec4(r[tet[0]], r[tet[1]], r[tet[2]], r[tet[3]]);
}

[[noreturn]] void rethrow_with_tet(DegenerateTetError& e, int tet_index) {
  std::ostringstream os;
  os << e.what() << " (tet " << tet_index << ")";
  DegenerateTetError out(e.q, os.str());
  out.tet = tet_index;
  throw out;
}

}  // namespace

double vertex_curvature(const Complex& c, const Metric& r, int v, double q_min) {
  if (v < 0 || v >= c.n_vertices)
    throw std::out_of_range("unknown vertex id " + std::to_string(v));
  double sum = 0.0;
  for (int ti : c.vertex_tets[v]) {
    const auto& t = c.tets[ti];
    int local = 0;
    while (t[local] != v) ++local;
    try {
      sum += solid_angle(tet_radii(r, t), local, q_min);
    } catch (DegenerateTetError& e) {
      rethrow_with_tet(e, ti);
    }
  }
  return 4.0 * M_PI - sum;
}

CurvatureField curvature_field(const Complex& c, const Metric& r, double q_min) {
  CurvatureField f;
  f.K.resize(c.n_vertices);
  for (int v = 0; v < c.n_vertices; ++v) f.K[v] = vertex_curvature(c, r, v, q_min);
  f.T = f.K.dot(r);
  f.k = f.T / r.sum();
  f.spread = f.K.maxCoeff() - f.K.minCoeff();
  return f;
}

double total_functional(const CurvatureField& field, const Metric& r) {
  return field.K.dot(r);
}

double average_curvature(const CurvatureField& field, const Metric& r) {
  return field.K.dot(r) / r.sum();
}

Eigen::VectorXd laplacian(const Complex& c, const Metric& r, const Eigen::VectorXd& f,
                          double q_min) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.n_vertices);
  for (int ti = 0; ti < static_cast<int>(c.tets.size()); ++ti) {
    const auto& t = c.tets[ti];
    const Vec4 rt = tet_radii(r, t);
    for (int a = 0; a < 4; ++a) {
      Vec4 grad;
      try {
        grad = solid_angle_gradient(rt, a, q_min);
      } catch (DegenerateTetError& e) {
        rethrow_with_tet(e, ti);
      }
      double acc = 0.0;
      for (int b = 0; b < 4; ++b)
        if (b != a) acc += grad[b] * rt[b] * (f[t[b]] - f[t[a]]);
      out[t[a]] += acc;
    }
  }
  return out;
}

double dual_edge_area(const Complex& c, const Metric& r, int edge_index, double q_min) {
  const auto& edge = c.edges.at(edge_index);
  double sum = 0.0;
  for (int ti : c.edge_tets[edge_index]) {
    const auto& t = c.tets[ti];
    int la = 0, lb = 0;
    for (int a = 0; a < 4; ++a) {
      if (t[a] == edge[0]) la = a;
      if (t[a] == edge[1]) lb = a;
    }
    try {
      sum += dual_area(tet_radii(r, t), la, lb, q_min);
    } catch (DegenerateTetError& e) {
      rethrow_with_tet(e, ti);
    }
  }
  return sum;
}

double regular_solid_angle() { return 3.0 * std::acos(1.0 / 3.0) - M_PI; }

double flat_degree_threshold() { return 4.0 * M_PI / regular_solid_angle(); }

}  // namespace yamabe
