#include "cgc/symplectic.hpp"

#include <cmath>
#include <numbers>

#include "cgc/error.hpp"
#include "cgc/hyper3d.hpp"
#include "cgc/tensor.hpp"

namespace cgc {

namespace {

void require_size(std::size_t got, std::size_t want) {
  if (got != want) throw Error(ErrorCode::MismatchedMesh, "field size does not match face count");
}

TensorField real_part(const QuadraticDifferential& q) {
  TensorField out(q.size());
  for (std::size_t f = 0; f < q.size(); ++f) out[f] = real_part_tensor(q[f]);
  return out;
}

double phi_form(const ImmersionData& base, const TensorField& dII, const QuadraticDifferential& q, const SurfaceMesh& mesh) {
  require_size(q.size(), mesh.face_count());
  return 0.25 * integrate(tensor_inner(dII, real_part(q), base.II), base.II, mesh);
}

double psi_form(const ImmersionData& base, const TensorField& dI, const SurfaceMesh& mesh) {
  TensorField target(mesh.face_count());
  for (std::size_t f = 0; f < target.size(); ++f) target[f] = base.II[f] - base.H[f] * base.I[f];
  return -0.5 * integrate(tensor_inner(dI, target, base.I), base.I, mesh);
}

}  // namespace

BeltramiField beltrami_from_variation(const TensorField& g, const TensorField& dg) {
  require_size(dg.size(), g.size());
  require_metric(g, "metric");
  BeltramiField nu(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    const Eigen::Matrix2d A = g[f].inverse() * dg[f];
    // Antilinear part of A as a real-linear map of C: A w = P w + Q conj(w).
    const Complex Q(0.5 * (A(0, 0) - A(1, 1)), 0.5 * (A(1, 0) + A(0, 1)));
    nu[f] = 0.5 * Q;
  }
  return nu;
}

Complex pairing_beltrami(const QuadraticDifferential& q, const BeltramiField& nu, const SurfaceMesh& mesh) {
  require_size(q.size(), mesh.face_count());
  require_size(nu.size(), mesh.face_count());
  Complex sum(0.0, 0.0);
  for (std::size_t f = 0; f < q.size(); ++f) sum += q[f] * nu[f] * mesh.quadrature[f];
  return sum;
}

double pairing_tensor(const QuadraticDifferential& q, const TensorField& dg, const TensorField& g, const SurfaceMesh& mesh) {
  require_size(q.size(), mesh.face_count());
  return 0.25 * integrate(tensor_inner(dg, real_part(q), g), g, mesh);
}

double liouville_phi(const ImmersionData& a, const ImmersionData& b, const QuadraticDifferential& q, double step,
                     const SurfaceMesh& mesh) {
  require_size(b.II.size(), a.II.size());
  return phi_form(a, (1.0 / step) * (b.II - a.II), q, mesh);
}

double liouville_psi(const ImmersionData& a, const ImmersionData& b, double step, const SurfaceMesh& mesh) {
  require_size(b.I.size(), a.I.size());
  return psi_form(a, (1.0 / step) * (b.I - a.I), mesh);
}

double liouville_phi_central(const ImmersionData& base, const ImmersionData& minus, const ImmersionData& plus,
                             const QuadraticDifferential& q, double step, const SurfaceMesh& mesh) {
  return phi_form(base, (0.5 / step) * (plus.II - minus.II), q, mesh);
}

double liouville_psi_central(const ImmersionData& base, const ImmersionData& minus, const ImmersionData& plus, double step,
                             const SurfaceMesh& mesh) {
  return psi_form(base, (0.5 / step) * (plus.I - minus.I), mesh);
}

double mk(const ImmersionData& s, const SurfaceMesh& mesh) { return integrate(s.H, s.I, mesh); }

ExactnessResult exactness_check(const ConfCotangentPoint& point, const QuadraticDifferential& direction, double step,
                                const WolfOptions& options) {
  if (point.mesh == nullptr) throw Error(ErrorCode::InvalidMesh, "cotangent point has no mesh");
  const SurfaceMesh& mesh = *point.mesh;
  require_size(direction.size(), mesh.face_count());
  ConfCotangentPoint minus = point, plus = point;
  minus.q = point.q + (-step) * direction;
  plus.q = point.q + step * direction;
  const KSurface s0 = reconstruct_ksurface(point, options);
  const KSurface sm = reconstruct_ksurface(minus, options);
  const KSurface sp = reconstruct_ksurface(plus, options);

  ExactnessResult r;
  r.phi = liouville_phi_central(s0.data, sm.data, sp.data, point.q, step, mesh);
  r.psi = liouville_psi_central(s0.data, sm.data, sp.data, step, mesh);
  r.lhs = 2.0 * r.phi - r.psi;
  const double m0 = mk(s0.data, mesh);
  r.rhs = -0.5 * (mk(sp.data, mesh) - mk(sm.data, mesh)) / (2.0 * step);
  const double floor = 1e-12 * std::abs(m0);
  r.residual = std::abs(r.lhs - r.rhs) / (std::abs(r.rhs) + floor);
  return r;
}

namespace {

// Closed forms for one Fuchsian end whose sigma-area is `area`.
struct FuchsianEnd {
  double area;
  double w(double k) const { return 0.5 * area * epsilon_of_k(k); }
  double vStar(double k) const {
    const double e = epsilon_of_k(k);
    return area * (0.5 * e - 0.25 * std::sinh(2.0 * e));
  }
  double m(double k) const { return area * std::sinh(2.0 * epsilon_of_k(k)); }
  double scale(double k) const { return -1.0 / k; }  // I = scale sigma
};

}  // namespace

std::vector<HamiltonianRow> hamiltonian_check_fuchsian(const std::vector<double>& kGrid, int chi, double step) {
  if (kGrid.empty()) throw Error(ErrorCode::InsufficientGrid, "empty k grid");
  // Two ends share |chi|; each has sigma-area 2 pi |chi| / 2.
  const FuchsianEnd end{std::numbers::pi * std::abs(chi)};
  std::vector<HamiltonianRow> rows;
  for (double k : kGrid) {
    require_k_in_range(k);
    require_k_in_range(k - step);
    require_k_in_range(k + step);
    HamiltonianRow r;
    r.k = k;
    const double m = end.m(k);
    r.wDot = (end.w(k + step) - end.w(k - step)) / (2.0 * step);
    r.conformalTerm = m / (8.0 * (k + 1.0));
    // Phi_k is constant along the Fuchsian family, so the conformal Liouville side vanishes.
    r.conformalResidual = std::abs(-r.wDot + r.conformalTerm) / std::abs(r.conformalTerm);

    r.vStarDot = (end.vStar(k + step) - end.vStar(k - step)) / (2.0 * step);
    r.hyperbolicBalance = -2.0 * r.vStarDot + m / (2.0 * k);
    // 1/(2k) integral of <-I - k dI/dk, II - H I>_I da_I with every tensor a multiple of sigma.
    const double a = end.scale(k);
    const double aDot = (end.scale(k + step) - end.scale(k - step)) / (2.0 * step);
    const double x = -a - k * aDot;
    const double b = -std::sqrt(k + 1.0) * a;
    r.hyperbolicLiouville = (1.0 / (2.0 * k)) * (2.0 * x * b / (a * a)) * a * end.area;
    r.hyperbolicResidual = std::abs(r.hyperbolicBalance - r.hyperbolicLiouville) / std::abs(m / (2.0 * k));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cgc
