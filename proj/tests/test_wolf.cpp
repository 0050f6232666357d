#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "fixtures.hpp"

#include "cgc/discrete_metric.hpp"
#include "cgc/error.hpp"
#include "cgc/tensor.hpp"
#include "cgc/wolf.hpp"

using namespace cgc;

namespace {

double area(const TensorField& g, const SurfaceMesh& m) { return integrate(ScalarField(m.face_count(), 1.0), g, m); }

double max_rel_diff(const TensorField& a, const TensorField& b) {
  double d = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) d = std::max(d, (a[f] - b[f]).norm() / b[f].norm());
  return d;
}

Eigen::Matrix2d random_spd(std::mt19937& rng, double det1) {
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  Eigen::Matrix2d a;
  a << 1.0 + u(rng), u(rng), 0.0, 1.0 + u(rng);
  Eigen::Matrix2d s = a * a.transpose() + 0.1 * Eigen::Matrix2d::Identity();
  if (det1 > 0.0) s /= std::sqrt(s.determinant());
  return s;
}

}  // namespace

TEST_CASE("zero differential returns the background metric") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const HyperbolicSolution s = solve_hyperbolic_detailed(m, QuadraticDifferential(m.face_count()));
  for (std::size_t f = 0; f < m.face_count(); ++f) CHECK(s.e[f] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(max_rel_diff(s.h, m.backgroundMetric) < 1e-9);
  CHECK(s.residual < 1e-10);
}

TEST_CASE("small differentials converge quickly and stay admissible") {
  const SurfaceMesh& m = fixtures::mesh(3);
  for (int i = 0; i < 3; ++i) {
    const QuadraticDifferential q = 0.05 * fixtures::basis(3).elements[i];
    const HyperbolicSolution s = solve_hyperbolic_detailed(m, q);
    CHECK(s.iterations <= 12);
    CHECK(s.residual < 1e-6);
    CHECK(curvature_residual(m, s.h, -1.0) < 1e-6);
    const ScalarField n = qd_norm(q, m);
    const TensorField rq = two_real_part(q);
    for (std::size_t f = 0; f < m.face_count(); ++f) {
      CHECK(s.e[f] > 2.0 * n[f]);
      CHECK((s.h[f] - rq[f] - s.e[f] * m.backgroundMetric[f]).norm() < 1e-12 * s.h[f].norm());
    }
  }
}

TEST_CASE("opposite differentials give opposite traceless parts") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const QuadraticDifferential q = 0.1 * fixtures::basis(3).elements[2];
  const TensorField h = solve_hyperbolic(m, q);
  const TensorField hs = solve_hyperbolic(m, (-1.0) * q);
  const TensorField a = traceless_part(h, m.backgroundMetric);
  const TensorField b = traceless_part(hs, m.backgroundMetric);
  for (std::size_t f = 0; f < m.face_count(); ++f) CHECK((a[f] + b[f]).norm() < 1e-12 * h[f].norm());
}

TEST_CASE("two admissible starts reach the same metric") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const QuadraticDifferential q = 0.3 * fixtures::basis(3).elements[1];
  const ScalarField n = qd_norm(q, m);
  ScalarField start(m.face_count());
  for (std::size_t f = 0; f < start.size(); ++f) start[f] = 1.0 + 4.0 * n[f];
  const HyperbolicSolution a = solve_hyperbolic_from(m, q, ScalarField(m.face_count(), 1.0));
  const HyperbolicSolution b = solve_hyperbolic_from(m, q, start);
  CHECK(max_rel_diff(a.h, b.h) < 1e-8);
}

TEST_CASE("inadmissible start and bad k are rejected") {
  const SurfaceMesh& m = fixtures::mesh(2);
  const QuadraticDifferential q = 2.0 * fixtures::basis(2).elements[0];
  CHECK_THROWS_AS(solve_hyperbolic_from(m, q, ScalarField(m.face_count(), 1e-3)), Error);
  try {
    reconstruct_ksurface({&m, q, 0.2});
    FAIL("expected KOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KOutOfRange);
  }
}

TEST_CASE("labourie operator of a metric with itself is the identity") {
  const SurfaceMesh& m = fixtures::mesh(2);
  const OperatorField b = labourie_operator(m.backgroundMetric, m.backgroundMetric);
  for (std::size_t f = 0; f < b.size(); ++f) CHECK((b[f] - Eigen::Matrix2d::Identity()).norm() < 1e-14);
}

TEST_CASE("labourie operator recovers a synthetic operator") {
  std::mt19937 rng(7);
  const std::size_t n = 200;
  TensorField h(n, true), hs(n, true);
  OperatorField b(n);
  for (std::size_t f = 0; f < n; ++f) {
    h[f] = random_spd(rng, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h[f]);
    const Eigen::Matrix2d root = es.operatorSqrt();
    // h^{-1/2} M h^{1/2} is h-self-adjoint, positive, and has det M = 1.
    b[f] = root.inverse() * random_spd(rng, 1.0) * root;
    hs[f] = b[f].transpose() * h[f] * b[f];
  }
  const OperatorField r = labourie_operator(h, hs);
  for (std::size_t f = 0; f < n; ++f) {
    CHECK((r[f] - b[f]).norm() < 1e-12 * b[f].norm());
    CHECK(std::abs(r[f].determinant() - 1.0) < 1e-10);
    const Eigen::Matrix2d hb = h[f] * r[f];
    CHECK(std::abs(hb(0, 1) - hb(1, 0)) < 1e-12 * hb.norm());
  }
}

TEST_CASE("Fuchsian point reconstructs the equidistant surface") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const double k = -0.75;
  const KSurface s = reconstruct_ksurface({&m, QuadraticDifferential(m.face_count()), k});
  for (std::size_t f = 0; f < m.face_count(); ++f) {
    CHECK((s.data.I[f] + m.backgroundMetric[f] / k).norm() < 1e-9 * s.data.I[f].norm());
    CHECK((s.data.B[f] - 0.5 * Eigen::Matrix2d::Identity()).norm() < 1e-9);
  }
  CHECK(s.residuals.codazzi < 1e-9);
  CHECK(s.data.convex());
}

TEST_CASE("reconstructed k-surface satisfies the structure equations") {
  const SurfaceMesh& m = fixtures::mesh(4);
  const double k = -0.5;
  const KSurface s = reconstruct_ksurface({&m, 0.1 * fixtures::basis(4).elements[0], k});
  const KSurfaceResiduals& r = s.residuals;
  CHECK(r.curvature < 1e-10);
  CHECK(l2_norm([&] {
          ScalarField d(m.face_count());
          for (std::size_t f = 0; f < d.size(); ++f) d[f] = s.data.Ki[f] - k;
          return d;
        }(),
                s.data.I, m) < 1e-9);
  CHECK(r.conformality < 1e-4);
  // Determinant and Eq 2.1 carry the discrete curvature's +-q asymmetry (see the notes in README).
  CHECK(r.determinant < 1e-3);
  CHECK(r.eq21 < 1e-3);
  CHECK(r.codazzi < 1e-3);
  CHECK(s.data.cayley_hamilton_defect() < 1e-13);
  CHECK(s.data.convex());
  // Area forms of I and II / sqrt(k + 1) agree.
  const double aI = area(s.data.I, m), aII = area(s.data.II, m);
  CHECK(std::abs(aI - aII / std::sqrt(k + 1.0)) < 1e-6 * aI);
  CHECK(divergence_identity_residual(s.data.I, s.data.II, m) < 2e-3);
}

TEST_CASE("Gauss and Codazzi residuals fall under refinement") {
  double gauss = 0.0, codazzi = 0.0;
  for (int level = 2; level <= 3; ++level) {
    const KSurface s = reconstruct_ksurface({&fixtures::mesh(level), 0.05 * fixtures::basis(level).elements[1], -0.25});
    if (level > 2) {
      CHECK(s.residuals.gauss * 1.8 < gauss);
      CHECK(s.residuals.codazzi * 1.8 < codazzi);
    }
    gauss = s.residuals.gauss;
    codazzi = s.residuals.codazzi;
  }
}

TEST_CASE("j functional identities") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const NormalizedPair same = make_pair(m.backgroundMetric, m.backgroundMetric);
  CHECK(j_functional(same, m) == doctest::Approx(8.0 * M_PI).epsilon(1e-10));
  const double k = -0.25;
  const KSurface s = reconstruct_ksurface({&m, 0.1 * fixtures::basis(3).elements[1], k});
  const double j = j_functional(s.pair, m);
  CHECK(std::abs(j - j_functional_swapped(s.pair, m)) < 1e-6 * j);
  CHECK(std::abs(j + k / std::sqrt(k + 1.0) * mean_curvature_integral(s, m)) < 1e-4 * j);
}

TEST_CASE("covector density at the Fuchsian point") {
  const SurfaceMesh& m = fixtures::mesh(2);
  const double k = -0.5;
  const HypCotangentPoint p = psi_point(ConfCotangentPoint{&m, QuadraticDifferential(m.face_count()), k});
  const double c = -std::sqrt(k + 1.0) / (2.0 * k);
  for (std::size_t f = 0; f < m.face_count(); ++f) CHECK((p.p[f] - c * p.h[f]).norm() < 1e-9 * p.h[f].norm());
}

TEST_CASE("covector density matches finite differences of the length function") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const double k = -0.5;
  const KSurface s = reconstruct_ksurface({&m, 0.1 * fixtures::basis(3).elements[0], k});
  const HypCotangentPoint p = psi_point(s);
  const double scale = -std::sqrt(k + 1.0) / k;
  // Pairing with h itself: the length function is homogeneous of degree 1/2 in h.
  const double j = j_functional(s.pair, m);
  CHECK(covector_pairing(p.p, p.h, p.h, m) == doctest::Approx(scale * 0.5 * j).epsilon(1e-10));
  std::vector<TensorField> directions{p.h, s.pair.hStar};
  TensorField bump(m.face_count()), shear(m.face_count());
  for (std::size_t f = 0; f < m.face_count(); ++f) {
    const Eigen::Vector2d c = m.centroid(f);
    bump[f] = (1.5 + std::sin(3.0 * c.x())) * m.backgroundMetric[f];
    shear[f] = m.backgroundMetric[f](0, 0) * (Eigen::Matrix2d() << 1.0 + c.y(), 0.3, 0.3, 0.2).finished();
  }
  directions.push_back(bump);
  directions.push_back(shear);
  for (const TensorField& d : directions) {
    const double eps = 1e-4;
    const double fd = (length_function(p.h + eps * d, s.pair.hStar, m) - length_function(p.h - (eps * d), s.pair.hStar, m)) /
                      (2.0 * eps);
    const double exact = covector_pairing(p.p, d, p.h, m);
    CHECK(std::abs(scale * fd - exact) < 1e-3 * std::abs(exact));
  }
}
