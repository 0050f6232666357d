#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "cgc/discrete_metric.hpp"
#include "cgc/error.hpp"
#include "cgc/mesh.hpp"

using namespace cgc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("level 0 octagon has the genus 2 quotient") {
  const SurfaceMesh m = build_bolza(0);
  CHECK(m.face_count() == 8);
  CHECK(m.euler_characteristic() == -2);
  CHECK(m.quotientVertexCount == 2);
  CHECK(m.homologyLoops.size() == 4);
}

TEST_CASE("geodesic fan areas add up to 4 pi") {
  const SurfaceMesh m = build_bolza(0);
  double sum = 0.0;
  for (int f = 0; f < 8; ++f) {
    const auto z = m.corners(f);
    sum += geodesic_triangle_area(z[0], z[1], z[2]);
  }
  CHECK(sum == doctest::Approx(4.0 * kPi).epsilon(1e-13));
}

TEST_CASE("euler characteristic and pairing involution at every level") {
  for (int l = 0; l <= 4; ++l) {
    const SurfaceMesh m = build_bolza(l);
    CHECK(m.euler_characteristic() == -2);
    CHECK(m.face_count() == 8u * (1u << (2 * l)));
    for (const auto& p : m.sidePairings) {
      const auto& back = m.sidePairings[p.partner];
      CHECK(back.partner == p.side);
      const Mobius id = back.map.compose(p.map);
      CHECK(std::abs(id.b) < 1e-12);
      CHECK(std::abs(std::abs(id.a) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("corner angles close up to a full turn") {
  const SurfaceMesh m = build_bolza(3);
  CHECK(corner_angle_sum(m) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("background area and curvature") {
  const SurfaceMesh m = build_bolza(3);
  const ScalarField one(m.face_count(), 1.0);
  CHECK(integrate(one, m.backgroundMetric, m) == doctest::Approx(4.0 * kPi).epsilon(1e-10));
  CHECK(integrate(ScalarField(m.face_count(), 0.0), m.backgroundMetric, m) == 0.0);
  CHECK(integrate(one, 4.0 * m.backgroundMetric, m) == doctest::Approx(16.0 * kPi).epsilon(1e-10));
  const DiscreteCurvature k = discrete_curvature(m, m.backgroundMetric);
  for (double kv : k.vertexCurvature) CHECK(kv == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("sampled area error shrinks with refinement") {
  double prev = 1e300;
  for (int l = 1; l <= 4; ++l) {
    const double err = std::abs(sampled_poincare_area(build_bolza(l)) - 4.0 * kPi);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("homology loops close and pair unimodularly") {
  for (int l = 0; l <= 3; ++l) {
    const SurfaceMesh m = build_bolza(l);
    for (const auto& loop : m.homologyLoops) CHECK(loop_is_closed(m, loop));
    const Eigen::Matrix4d J = intersection_matrix(m);
    CHECK(std::abs(std::abs(J.determinant()) - 1.0) < 1e-9);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(J(i, j) - std::round(J(i, j))) < 1e-9);
        CHECK(J(i, j) == doctest::Approx(-J(j, i)));
      }
  }
}

TEST_CASE("refine splits every face into four") {
  const SurfaceMesh a = build_bolza(1);
  const SurfaceMesh b = refine(a);
  CHECK(b.face_count() == 4 * a.face_count());
  CHECK(b.euler_characteristic() == -2);
  CHECK(b.vertices == build_bolza(2).vertices);
}

TEST_CASE("cap is enforced") {
  CHECK_THROWS_AS(build_bolza(kMaxRefinementLevel + 1), Error);
  CHECK_THROWS_AS(build_bolza(-1), Error);
}

TEST_CASE("mesh file round trip is exact") {
  const SurfaceMesh m = build_bolza(2);
  std::stringstream s;
  write_mesh(s, m);
  const SurfaceMesh r = read_mesh(s);
  CHECK(r.vertices == m.vertices);
  CHECK(r.faces == m.faces);
  CHECK(r.homologyLoops == m.homologyLoops);
  for (std::size_t f = 0; f < m.face_count(); ++f) CHECK(r.backgroundMetric[f] == m.backgroundMetric[f]);
  for (int i = 0; i < 8; ++i) {
    CHECK(r.sidePairings[i].map.a == m.sidePairings[i].map.a);
    CHECK(r.sidePairings[i].map.b == m.sidePairings[i].map.b);
  }
}
