#include "cgc/hyper3d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "cgc/error.hpp"
#include "cgc/tensor.hpp"

namespace cgc {

namespace {

void require_size(std::size_t got, std::size_t want) {
  if (got != want) throw Error(ErrorCode::MismatchedMesh, "field size does not match face count");
}

// Antiderivatives of cosh^2, cosh sinh and sinh^2.
double int_cc(double r) { return 0.5 * r + 0.25 * std::sinh(2.0 * r); }
double int_cs(double r) { return 0.5 * std::sinh(r) * std::sinh(r); }
double int_ss(double r) { return 0.25 * std::sinh(2.0 * r) - 0.5 * r; }

// Throws if cosh r + mu sinh r vanishes for some r between a and b, for an eigenvalue mu of B.
void check_focal(double H, double Ke, double a, double b, std::size_t face) {
  const double disc = 0.25 * H * H - Ke;
  if (disc < 0.0) return;
  const double lo = std::tanh(std::min(a, b));
  const double hi = std::tanh(std::max(a, b));
  for (double sign : {-1.0, 1.0}) {
    const double mu = 0.5 * H + sign * std::sqrt(disc);
    if (mu == 0.0) continue;
    const double t = -1.0 / mu;
    if (t >= lo && t <= hi) throw Error(ErrorCode::FocalPoint, "normal flow meets a focal point on face " + std::to_string(face));
  }
}

double face_area(const Eigen::Matrix2d& g, double coordArea) { return std::sqrt(g.determinant()) * coordArea; }

}  // namespace

double epsilon_of_k(double k) {
  require_k_in_range(k);
  return std::atanh(std::sqrt(k + 1.0));
}

ImmersionData geodesic_surface(const SurfaceMesh& mesh) {
  return ImmersionData::make(mesh.backgroundMetric, OperatorField(mesh.face_count()), mesh);
}

ImmersionData parallel_flow(const ImmersionData& s, double rho, const SurfaceMesh& mesh) {
  const std::size_t n = mesh.face_count();
  require_size(s.I.size(), n);
  require_size(s.B.size(), n);
  const double c = std::cosh(rho), sh = std::sinh(rho);
  TensorField I(n, true);
  OperatorField B(n);
  for (std::size_t f = 0; f < n; ++f) {
    check_focal(s.H[f], s.Ke[f], 0.0, rho, f);
    const Eigen::Matrix2d F = c * Eigen::Matrix2d::Identity() + sh * s.B[f];
    I[f] = F.transpose() * s.I[f] * F;
    B[f] = (c * s.B[f] + sh * Eigen::Matrix2d::Identity()) * F.inverse();
  }
  return ImmersionData::make(I, B, mesh);
}

ImmersionData fuchsian_ksurface(const SurfaceMesh& mesh, double k) {
  require_k_in_range(k);
  const std::size_t n = mesh.face_count();
  TensorField I(n, true);
  OperatorField B(n);
  for (std::size_t f = 0; f < n; ++f) {
    I[f] = (-1.0 / k) * mesh.backgroundMetric[f];
    B[f] = std::sqrt(k + 1.0) * Eigen::Matrix2d::Identity();
  }
  return ImmersionData::make(I, B, mesh);
}

double slab_volume(const ImmersionData& s, double rho0, double rho1, const SurfaceMesh& mesh) {
  const std::size_t n = mesh.face_count();
  require_size(s.I.size(), n);
  const double cc = int_cc(rho1) - int_cc(rho0);
  const double cs = int_cs(rho1) - int_cs(rho0);
  const double ss = int_ss(rho1) - int_ss(rho0);
  double total = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    check_focal(s.H[f], s.Ke[f], rho0, rho1, f);
    total += (cc + s.H[f] * cs + s.Ke[f] * ss) * face_area(s.I[f], mesh.quadrature[f]);
  }
  return total;
}

VolumeReport volume_report(double k, int chi) {
  VolumeReport r;
  r.k = k;
  r.epsilon = epsilon_of_k(k);
  const double a = std::numbers::pi * std::abs(chi);
  const double s2 = std::sinh(2.0 * r.epsilon);
  r.V = a * (0.5 * s2 + r.epsilon);
  r.meanH = 2.0 * a * s2;
  r.W = r.V - 0.25 * r.meanH;
  r.Vstar = r.V - 0.5 * r.meanH;
  r.Wtilde = r.W - a * r.epsilon;
  r.mk = 0.5 * r.meanH;
  return r;
}

VolumeReport volume_report(const SurfaceMesh& mesh, double k, int chi) {
  VolumeReport r;
  r.k = k;
  r.epsilon = epsilon_of_k(k);
  // The mesh carries one copy of the surface; the doubled manifold has |chi| = 2 |chi(surface)|.
  const double scale = std::abs(chi) / (2.0 * std::abs(mesh.euler_characteristic()));
  const ImmersionData core = geodesic_surface(mesh);
  const ImmersionData top = parallel_flow(core, r.epsilon, mesh);
  const ImmersionData bottom = parallel_flow(core, -r.epsilon, mesh);
  const double topH = integrate(top.H, top.I, mesh);
  // Outward normal of the lower surface points the other way.
  const double bottomH = -integrate(bottom.H, bottom.I, mesh);
  r.V = scale * slab_volume(core, -r.epsilon, r.epsilon, mesh);
  r.meanH = scale * (topH + bottomH);
  r.W = r.V - 0.25 * r.meanH;
  r.Vstar = r.V - 0.5 * r.meanH;
  r.Wtilde = r.W - std::numbers::pi * std::abs(chi) * r.epsilon;
  r.mk = 0.5 * r.meanH;
  return r;
}

void write_volumes_csv(std::ostream& out, const std::vector<VolumeReport>& rows) {
  out << "k,epsilon,V,meanH,W,Vstar,Wtilde\n" << std::setprecision(17);
  for (const VolumeReport& r : rows)
    out << r.k << ',' << r.epsilon << ',' << r.V << ',' << r.meanH << ',' << r.W << ',' << r.Vstar << ',' << r.Wtilde
        << '\n';
}

void write_volumes_csv(const std::string& path, const std::vector<VolumeReport>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_volumes_csv(out, rows);
}

double schlafli_integrand(const TensorField& I, const TensorField& II, const TensorField& dI, const ScalarField& dH,
                          const SurfaceMesh& mesh) {
  ScalarField d = tensor_inner(dI, II, I);
  require_size(dH.size(), d.size());
  for (std::size_t f = 0; f < d.size(); ++f) d[f] = dH[f] + 0.5 * d[f];
  return 0.5 * integrate(d, I, mesh);
}

double dW_integrand(const ImmersionData& s, const TensorField& dII, const ScalarField& dKe, const SurfaceMesh& mesh) {
  const std::size_t n = mesh.face_count();
  require_size(dKe.size(), n);
  TensorField target(n);
  for (std::size_t f = 0; f < n; ++f) {
    if (!(s.Ke[f] > 0.0))
      throw Error(ErrorCode::NotPositiveDefinite, "extrinsic curvature not positive on face " + std::to_string(f));
    target[f] = s.III[f] - 0.5 * s.H[f] * s.II[f];
  }
  ScalarField d = tensor_inner(dII, target, s.II);
  for (std::size_t f = 0; f < n; ++f) d[f] += dKe[f] / (2.0 * s.Ke[f]) * s.H[f];
  return 0.25 * integrate(d, s.I, mesh);
}

double dVstar_integrand(const ImmersionData& s, const TensorField& dI, const SurfaceMesh& mesh) {
  const std::size_t n = mesh.face_count();
  TensorField target(n);
  for (std::size_t f = 0; f < n; ++f) target[f] = s.II[f] - s.H[f] * s.I[f];
  return 0.25 * integrate(tensor_inner(dI, target, s.I), s.I, mesh);
}

ImmersionData desitter_dual(const ImmersionData& s, const SurfaceMesh& mesh) {
  const std::size_t n = mesh.face_count();
  require_size(s.B.size(), n);
  OperatorField inv(n);
  for (std::size_t f = 0; f < n; ++f) {
    const double scale = s.B[f].squaredNorm();
    if (!(std::abs(s.B[f].determinant()) > 1e-14 * scale) || scale == 0.0)
      throw Error(ErrorCode::SingularOperator, "shape operator not invertible on face " + std::to_string(f));
    inv[f] = s.B[f].inverse();
  }
  TensorField I = s.III;
  I.metricCandidate = true;
  return ImmersionData::make(I, inv, mesh);
}

double dual_gauss_residual(const ImmersionData& dual, const SurfaceMesh& mesh) {
  ScalarField d(dual.I.size());
  for (std::size_t f = 0; f < d.size(); ++f) d[f] = dual.Ki[f] - (1.0 - dual.Ke[f]);
  return l2_norm(d, dual.I, mesh);
}

double richardson_extrapolate(const std::vector<double>& x, const std::vector<double>& y, double x0) {
  if (x.size() != y.size()) throw Error(ErrorCode::Usage, "sample lists differ in length");
  if (x.size() < 3) throw Error(ErrorCode::InsufficientGrid, "extrapolation needs at least 3 samples");
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(x[a] - x0) < std::abs(x[b] - x0); });
  double value = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const double den = x[order[i]] - x[order[j]];
      if (den == 0.0) throw Error(ErrorCode::InsufficientGrid, "repeated grid point");
      w *= (x0 - x[order[j]]) / den;
    }
    value += w * y[order[i]];
  }
  return value;
}

namespace {

double limit_of(const std::vector<VolumeReport>& rows) {
  std::vector<double> x, y;
  for (const VolumeReport& r : rows) {
    x.push_back(r.k);
    y.push_back(r.Wtilde);
  }
  return richardson_extrapolate(x, y, 0.0);
}

void require_grid(const std::vector<double>& kGrid) {
  if (kGrid.size() < 3) throw Error(ErrorCode::InsufficientGrid, "k grid needs at least 3 points");
  for (double k : kGrid) require_k_in_range(k);
}

}  // namespace

double renormalized_limit(const std::vector<double>& kGrid, int chi) {
  require_grid(kGrid);
  std::vector<VolumeReport> rows;
  for (double k : kGrid) rows.push_back(volume_report(k, chi));
  return limit_of(rows);
}

double renormalized_limit(const SurfaceMesh& mesh, const std::vector<double>& kGrid, int chi) {
  require_grid(kGrid);
  std::vector<VolumeReport> rows;
  for (double k : kGrid) rows.push_back(volume_report(mesh, k, chi));
  return limit_of(rows);
}

double vstar_derivative(double k, int chi) {
  const double eps = epsilon_of_k(k);
  const double s = std::sqrt(k + 1.0);
  const double dEps = 1.0 / (2.0 * s * -k);
  return std::numbers::pi * std::abs(chi) * (1.0 - std::cosh(2.0 * eps)) * dEps;
}

std::vector<double> default_k_grid() { return {-0.5, -0.25, -0.1, -0.05, -0.01}; }

}  // namespace cgc
