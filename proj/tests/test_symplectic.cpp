#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "fixtures.hpp"

#include "cgc/hyper3d.hpp"
#include "cgc/symplectic.hpp"
#include "cgc/tensor.hpp"

using namespace cgc;

namespace {

constexpr double pi = std::numbers::pi;

// Random symmetric variation, smooth enough to be a fair test but not tied to any basis element.
TensorField random_variation(const SurfaceMesh& m, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = n(rng), b = n(rng), c = n(rng), w = n(rng);
  TensorField t(m.face_count());
  for (std::size_t f = 0; f < t.size(); ++f) {
    const Eigen::Vector2d x = m.centroid(static_cast<int>(f));
    const double s = std::sin(3.0 * x.x() + w) + 0.3 * x.y();
    t[f] << a + s, b * x.x() + c, b * x.x() + c, -a + 2.0 * s * x.y();
    t[f] *= m.backgroundMetric[f](0, 0);
  }
  return t;
}

}  // namespace

TEST_CASE("Beltrami coefficient of a variation") {
  const SurfaceMesh& m = fixtures::mesh(2);
  const TensorField& g = m.backgroundMetric;
  const BeltramiField conformal = beltrami_from_variation(g, 2.5 * g);
  for (Complex v : conformal.nu) CHECK(std::abs(v) < 1e-15);

  const QuadraticDifferential& q = fixtures::basis(2).elements[0];
  const BeltramiField nu = beltrami_from_variation(g, two_real_part(q));
  for (std::size_t f = 0; f < m.face_count(); ++f) {
    // For g = lambda^2 |dz|^2 and dg = 2 Re(phi dz^2): nu = conj(phi) / lambda^2, so |nu| = |q|_g.
    const double lambda2 = g[f](0, 0);
    CHECK(std::abs(nu[f] - std::conj(q[f]) / lambda2) < 1e-14 * (1.0 + std::abs(nu[f])));
  }

  std::mt19937 rng(7);
  const TensorField a = random_variation(m, rng), b = random_variation(m, rng);
  const BeltramiField sum = beltrami_from_variation(g, a + 2.0 * b);
  const BeltramiField na = beltrami_from_variation(g, a), nb = beltrami_from_variation(g, b);
  for (std::size_t f = 0; f < m.face_count(); ++f) CHECK(std::abs(sum[f] - na[f] - 2.0 * nb[f]) < 1e-12);
}

TEST_CASE("tensor and Beltrami pairings agree") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const auto& basis = fixtures::basis(3).elements;
  const TensorField& g = m.backgroundMetric;
  CHECK(std::abs(pairing_beltrami(QuadraticDifferential(m.face_count()), beltrami_from_variation(g, g), m)) == 0.0);
  Eigen::Matrix3d gram;
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(pairing_beltrami(basis[i], beltrami_from_variation(g, 0.7 * g), m)) < 1e-15);
    CHECK(std::abs(pairing_tensor(basis[i], g, g, m)) < 1e-14);
    for (int j = 0; j < 3; ++j) {
      const TensorField dg = two_real_part(basis[j]);
      gram(i, j) = pairing_tensor(basis[i], dg, g, m);
      const Complex b = pairing_beltrami(basis[i], beltrami_from_variation(g, dg), m);
      CHECK(std::abs(gram(i, j) - b.real()) < 1e-8);
    }
  }
  CHECK((gram - gram.transpose()).norm() < 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(gram).eigenvalues().minCoeff() > 0.0);

  std::mt19937 rng(2024);
  for (int r = 0; r < 20; ++r) {
    const TensorField dg = random_variation(m, rng);
    const QuadraticDifferential& q = basis[r % 3];
    CHECK(std::abs(pairing_tensor(q, dg, g, m) - pairing_beltrami(q, beltrami_from_variation(g, dg), m).real()) < 1e-8);
  }
}

TEST_CASE("mean curvature integral") {
  const SurfaceMesh& m = fixtures::mesh(3);
  CHECK(mk(fuchsian_ksurface(m, -0.75), m) == doctest::Approx(16.0 * pi / 3.0).epsilon(1e-12));
  CHECK(mk(geodesic_surface(m), m) == 0.0);
  for (double k : {-0.75, -0.25}) {
    const KSurface s = reconstruct_ksurface({&m, 0.1 * fixtures::basis(3).elements[1], k});
    const double j = j_functional(s.pair, m);
    CHECK(std::abs(j + k / std::sqrt(k + 1.0) * mk(s.data, m)) / j < 1e-4);
  }
}

TEST_CASE("Liouville evaluators") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const auto& basis = fixtures::basis(3).elements;
  const double k = -0.5, step = 1e-3;
  const ConfCotangentPoint p{&m, 0.1 * basis[0], k};
  const ConfCotangentPoint pp{&m, p.q + step * basis[0], k};
  const KSurface a = reconstruct_ksurface(p), b = reconstruct_ksurface(pp);

  CHECK(liouville_phi(a.data, a.data, p.q, step, m) == 0.0);
  CHECK(liouville_psi(a.data, a.data, step, m) == 0.0);

  // Phi side through the tensor pairing on II.
  const TensorField dII = (1.0 / step) * (b.data.II - a.data.II);
  CHECK(liouville_phi(a.data, b.data, p.q, step, m) == doctest::Approx(pairing_tensor(p.q, dII, a.data.II, m)));

  // Psi side through the hyperbolic covector: the variation of h_k = -k I is -k dI.
  const double psi = liouville_psi(a.data, b.data, step, m);
  const TensorField dh = (-k / step) * (b.data.I - a.data.I);
  const double viaCovector = covector_pairing(psi_density(a.pair, k), dh, a.pair.h, m);
  CHECK(std::abs(psi - viaCovector) < 1e-3 * std::abs(psi));

  const double swapped = liouville_psi(b.data, a.data, step, m);
  CHECK(std::abs(psi + swapped) < 10.0 * step * std::abs(psi));

  // Pure k variation of Fuchsian ends reduces to the dual-volume integrand.
  const ImmersionData f0 = fuchsian_ksurface(m, k), f1 = fuchsian_ksurface(m, k + step);
  const TensorField dI = (1.0 / step) * (f1.I - f0.I);
  CHECK(liouville_psi(f0, f1, step, m) == doctest::Approx(-2.0 * dVstar_integrand(f0, dI, m)).epsilon(1e-12));
}

TEST_CASE("W variation along the fiber matches the conformal Liouville form") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const auto& basis = fixtures::basis(3).elements;
  const double k = -0.5, step = 1e-3;
  const ConfCotangentPoint p{&m, 0.1 * basis[0], k};
  const KSurface a = reconstruct_ksurface(p);
  const KSurface b = reconstruct_ksurface({&m, p.q + step * basis[1], k});
  const TensorField dII = (1.0 / step) * (b.data.II - a.data.II);
  const double dW = dW_integrand(a.data, dII, ScalarField(m.face_count()), m);
  const double phi = liouville_phi(a.data, b.data, p.q, step, m);
  // Both vanish for a fixed conformal class; compare against the size of the variation itself.
  const double scale = 0.25 * integrate(tensor_norm(dII, a.data.II), a.data.I, m);
  CHECK(std::abs(dW + phi) < 1e-3 * scale);
}

TEST_CASE("exactness identity on radial fiber directions") {
  const SurfaceMesh& m = fixtures::mesh(3);
  const auto& basis = fixtures::basis(3).elements;
  for (int i = 0; i < 3; ++i) {
    const ExactnessResult r = exactness_check({&m, 0.1 * basis[i], -0.5}, basis[i], 1e-3);
    CHECK(std::abs(r.rhs) > 1e-3);
    CHECK(r.residual < 5e-3);
  }
  // Second-order central differences: the step-to-step change shrinks by four under halving.
  const ConfCotangentPoint p{&m, 0.1 * basis[0], -0.5};
  const double r1 = exactness_check(p, basis[0], 1e-2).rhs;
  const double r2 = exactness_check(p, basis[0], 5e-3).rhs;
  const double r3 = exactness_check(p, basis[0], 2.5e-3).rhs;
  const double ratio = std::abs(r1 - r2) / std::abs(r2 - r3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Hamiltonian balances on the Fuchsian locus") {
  const auto rows = hamiltonian_check_fuchsian({-0.9, -0.5, -0.1}, 4);
  REQUIRE(rows.size() == 3);
  for (const HamiltonianRow& r : rows) {
    CHECK(r.conformalResidual < 1e-6);
    CHECK(r.hyperbolicResidual < 1e-4);
  }
  const auto half = hamiltonian_check_fuchsian({-0.5}, 4);
  const double end = 2.0 * pi * 2.0;
  const double e = std::atanh(std::sqrt(0.5));
  CHECK(half[0].conformalTerm == doctest::Approx(end * std::sinh(2.0 * e) / 4.0));
  CHECK_THROWS(hamiltonian_check_fuchsian({}, 4));
}
