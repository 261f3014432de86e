#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "yamabe/metric.hpp"
#include "yamabe/oracle.hpp"

using namespace yamabe;
using doctest::Approx;

namespace {

// positive root of (3 + x)^2 = 2 (3 + x^2) in x = 1/r_l; the fourth radius
// that makes (1,1,1,.) exactly degenerate
const double kDegenerateFourth = 1.0 / (3.0 + 2.0 * std::sqrt(3.0));

std::vector<Vec4> random_sample(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec4> out;
  for (int i = 0; i < n; ++i) out.push_back(oracle::random_tet(rng));
  return out;
}

}  // namespace

TEST_CASE("edge lengths are radius sums") {
  CHECK(edge_length(1, 1) == 2.0);
  CHECK(edge_length(1, 2) == 3.0);
  CHECK(edge_length(0.5, 0.25) == 0.75);
  CHECK_THROWS_AS(edge_length(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("face angles") {
  const FaceAngle eq = face_angle(1, 1, 1);
  CHECK(eq.angle == Approx(M_PI / 3.0).epsilon(1e-14));

  // law of cosines on side lengths (2,3,3)
  const FaceAngle g = face_angle(1, 1, 2);
  CHECK(g.cos_value == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(g.angle == Approx(std::acos(1.0 / 3.0)).epsilon(1e-14));

  for (const Vec4& r : random_sample(50, 7)) {
    const FaceAngle a = face_angle(r[0], r[1], r[2]);
    CHECK(a.sin_value * a.sin_value + a.cos_value * a.cos_value == Approx(1.0).epsilon(1e-14));
    CHECK(a.angle > 0.0);
    CHECK(a.angle < M_PI);
  }
}

TEST_CASE("face area, perimeter, inradius") {
  CHECK(face_area(1, 1, 1) == Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(face_area(1, 1, 2) == Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(face_inradius(1, 1, 1) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(face_inradius(1, 1, 2) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  for (const Vec4& r : random_sample(50, 8)) {
    const double A = face_area(r[0], r[1], r[2]);
    const double P = face_perimeter(r[0], r[1], r[2]);
    const double rin = face_inradius(r[0], r[1], r[2]);
    CHECK(2.0 * A / P == Approx(rin).epsilon(1e-12));
    CHECK(2.0 * A == Approx(rin * P).epsilon(1e-12));
    // degree-2 homogeneity
    const double lambda = 3.7;
    CHECK(face_area(lambda * r[0], lambda * r[1], lambda * r[2]) ==
          Approx(lambda * lambda * A).epsilon(1e-13));
  }
}

TEST_CASE("nondegeneracy quadratic") {
  CHECK(nondegeneracy_q(Vec4(1, 1, 1, 1)) == Approx(8.0).epsilon(1e-15));
  CHECK(nondegeneracy_q(Vec4(1, 2, 3, 6)) == Approx(11.0 / 9.0).epsilon(1e-14));
  CHECK(nondegeneracy_q(Vec4(1, 1, 1, kDegenerateFourth)) == Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("tet volume") {
  // regular tetrahedron of edge 2: 8 / (6 sqrt 2)
  CHECK(tet_volume(Vec4(1, 1, 1, 1)) == Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-14));
  CHECK(tet_volume(Vec4(1, 1, 1, kDegenerateFourth)) == Approx(0.0).scale(1).epsilon(1e-7));
  CHECK_THROWS_AS(tet_volume(Vec4(1, 1, 1, 0.1)), DegenerateTetError);

  for (const Vec4& r : random_sample(50, 9)) {
    const double lambda = 0.37;
    CHECK(tet_volume(Vec4(lambda * r)) ==
          Approx(lambda * lambda * lambda * tet_volume(r)).epsilon(1e-12));
    const auto cm = oracle::cayley_menger_volume({r[0] + r[1], r[0] + r[2], r[0] + r[3],
                                                  r[1] + r[2], r[1] + r[3], r[2] + r[3]});
    CHECK(cm.volume == Approx(tet_volume(r)).epsilon(1e-10));
  }
}

TEST_CASE("midsphere radius") {
  // regular tetrahedron edge a: midradius a / (2 sqrt 2)
  CHECK(midsphere_radius(Vec4(1, 1, 1, 1)) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(midsphere_radius(Vec4(2, 2, 2, 2)) == Approx(2.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(midsphere_radius(Vec4(1, 1, 1, kDegenerateFourth)), DegenerateTetError);
}

TEST_CASE("dihedral angle from face angles") {
  CHECK(dihedral_angle(M_PI / 3, M_PI / 3, M_PI / 3) ==
        Approx(std::acos(1.0 / 3.0)).epsilon(1e-14));
  CHECK(dihedral_angle(M_PI / 3, M_PI / 3, 2 * M_PI / 3) == Approx(M_PI).epsilon(1e-9));
  CHECK(dihedral_angle(1.0, 0.4, 0.6) == Approx(0.0).scale(1).epsilon(1e-7));
  CHECK_THROWS_AS(dihedral_angle(0.3, 0.3, 2.0), DegenerateTetError);
}

TEST_CASE("solid angle") {
  const double regular = 3.0 * std::acos(1.0 / 3.0) - M_PI;
  for (int v = 0; v < 4; ++v)
    CHECK(solid_angle(Vec4(1, 1, 1, 1), v) == Approx(regular).epsilon(1e-14));
  CHECK(solid_angle(Vec4(2, 2, 2, 2), 0) == Approx(regular).epsilon(1e-14));

  // oracle: recompute from an explicit embedding
  const Vec4 skew(1, 1, 1, 1.0 / 3.0);
  const auto x = oracle::embed_tetrahedron(skew);
  for (int v = 0; v < 4; ++v)
    CHECK(solid_angle(skew, v) == Approx(oracle::embedded_solid_angle(x, v)).epsilon(1e-12));
}

TEST_CASE("signed heights") {
  CHECK(signed_height(Vec4(1, 1, 1, 1), 3) == Approx(1.0 / std::sqrt(6.0)).epsilon(1e-13));
  // 1/r_i + 1/r_j + 1/r_k = 1/r_l puts the midsphere center on the face
  CHECK(signed_height(Vec4(1, 1, 1, 1.0 / 3.0), 3) == Approx(0.0).scale(1).epsilon(1e-14));
  // 1/r_l = 5 > 3: center crosses to the far side
  CHECK(signed_height(Vec4(1, 1, 1, 0.2), 3) < 0.0);

  for (const Vec4& r : random_sample(50, 10)) {
    const double rmid = midsphere_radius(r);
    for (int d = 0; d < 4; ++d) {
      const double h = signed_height(r, d);
      int f[3], p = 0;
      for (int a = 0; a < 4; ++a)
        if (a != d) f[p++] = a;
      const double rin = face_inradius(r[f[0]], r[f[1]], r[f[2]]);
      CHECK(h * h + rin * rin == Approx(rmid * rmid).epsilon(1e-10));
    }
  }
}

TEST_CASE("dual areas") {
  CHECK(dual_area(Vec4(1, 1, 1, 1), 0, 1) ==
        Approx(1.0 / (3.0 * std::sqrt(2.0))).epsilon(1e-13));

  // homogeneity of areas
  for (const Vec4& r : random_sample(20, 11)) {
    const double lambda = 2.1;
    CHECK(dual_area(Vec4(lambda * r), 0, 2) ==
          Approx(lambda * lambda * dual_area(r, 0, 2)).epsilon(1e-11));
  }

  // sign against the coordinate-embedding oracle, including a negative case
  const Vec4 neg(1, 1, 1, 0.2);
  const auto x = oracle::embed_tetrahedron(neg);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      CHECK(dual_area(neg, a, b) ==
            Approx(oracle::embedded_dual_area(x, neg, a, b)).epsilon(1e-10));
  CHECK(dual_area(neg, 0, 1) < dual_area(Vec4(1, 1, 1, 1), 0, 1));
}

TEST_CASE("tet geometry bundle at the regular point") {
  const TetGeometry t = tet_geometry(Vec4(1, 1, 1, 1));
  CHECK(t.q == Approx(8.0).epsilon(1e-15));
  CHECK(t.volume == Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-14));
  CHECK(t.midsphere == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  for (int a = 0; a < 4; ++a) {
    CHECK(t.solid[a] == Approx(3.0 * std::acos(1.0 / 3.0) - M_PI).epsilon(1e-13));
    CHECK(t.height[a] == Approx(1.0 / std::sqrt(6.0)).epsilon(1e-13));
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      CHECK(t.gamma[a][b].angle == Approx(M_PI / 3.0).epsilon(1e-14));
      CHECK(t.dihedral[a][b] == Approx(std::acos(1.0 / 3.0)).epsilon(1e-14));
      CHECK(t.dual[a][b] == Approx(1.0 / (3.0 * std::sqrt(2.0))).epsilon(1e-13));
      CHECK(t.omega[a][b] == Approx(1.0 / (3.0 * std::sqrt(2.0))).epsilon(1e-12));
    }
  }
}

TEST_CASE("tet geometry invariants on random tets") {
  for (const Vec4& r : random_sample(100, 12)) {
    const TetGeometry t = tet_geometry(r);
    // solid angle = incident dihedrals minus pi
    for (int a = 0; a < 4; ++a) {
      double sum = -M_PI;
      for (int b = 0; b < 4; ++b)
        if (b != a) sum += t.dihedral[a][b];
      CHECK(t.solid[a] == Approx(sum).epsilon(1e-12));
    }
    // V^2 = (1/9) prod r^2 Q
    CHECK(t.volume * t.volume ==
          Approx(r.prod() * r.prod() * t.q / 9.0).epsilon(1e-12));
    // volume partition
    double vsum = 0;
    for (int d = 0; d < 4; ++d) vsum += t.area[d] * t.height[d] / 3.0;
    CHECK(vsum == Approx(t.volume).epsilon(1e-10));
    // scale invariance of angles
    const TetGeometry ts = tet_geometry(Vec4(5.0 * r));
    for (int a = 0; a < 4; ++a) {
      CHECK(ts.solid[a] == Approx(t.solid[a]).epsilon(1e-12));
      for (int b = 0; b < 4; ++b)
        if (a != b) CHECK(ts.dihedral[a][b] == Approx(t.dihedral[a][b]).epsilon(1e-12));
    }
  }
}

TEST_CASE("tet geometry at (1,2,3,6) cross-checked by Cayley-Menger") {
  const Vec4 r(1, 2, 3, 6);
  const TetGeometry t = tet_geometry(r);
  CHECK(t.q == Approx(11.0 / 9.0).epsilon(1e-14));
  const auto cm = oracle::cayley_menger_volume({3, 4, 7, 5, 8, 9});
  CHECK(t.volume == Approx(cm.volume).epsilon(1e-10));
}

TEST_CASE("degenerate tet carries Q in the error") {
  try {
    tet_geometry(Vec4(1, 1, 1, 0.05));
    FAIL("expected DegenerateTetError");
  } catch (const DegenerateTetError& e) {
    CHECK(e.q < 0.0);
  }
}
