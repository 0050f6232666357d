#include "cgc/wolf.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "cgc/discrete_metric.hpp"
#include "cgc/error.hpp"
#include "cgc/tensor.hpp"

namespace cgc {

namespace {

Eigen::Matrix2d spd_sqrt(const Eigen::Matrix2d& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (m + m.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw Error(ErrorCode::NotPositiveDefinite, std::string(what) + " is not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::MismatchedMesh, "field sizes differ");
}

}  // namespace

ScalarField qd_norm(const QuadraticDifferential& q, const SurfaceMesh& mesh) {
  require_same(q.size(), mesh.face_count());
  ScalarField out(q.size());
  for (std::size_t f = 0; f < q.size(); ++f) out[f] = std::abs(q[f]) / mesh.backgroundMetric[f](0, 0);
  return out;
}

HyperbolicSolution solve_hyperbolic_from(const SurfaceMesh& mesh, const QuadraticDifferential& q, const ScalarField& initial,
                                         const WolfOptions& options) {
  require_same(q.size(), mesh.face_count());
  require_same(initial.size(), mesh.face_count());
  ConformalFamily fam;
  fam.mesh = &mesh;
  fam.fixed = two_real_part(q);
  fam.conformal = mesh.backgroundMetric;
  ConformalSolveOptions opt;
  opt.tolerance = options.tolerance;
  opt.maxIterations = options.maxIterations;
  opt.admissibilityMargin = options.margin;
  if (!admissible(fam, initial, options.margin))
    throw Error(ErrorCode::PositivityLoss, "initial factor does not dominate 2|q|");
  ConformalSolveResult res = solve_constant_curvature(fam, initial, -1.0, opt);
  HyperbolicSolution out;
  out.h = std::move(res.metric);
  out.h.metricCandidate = true;
  out.e = std::move(res.factor);
  out.iterations = res.iterations;
  out.residual = res.residual;
  return out;
}

HyperbolicSolution solve_hyperbolic_detailed(const SurfaceMesh& mesh, const QuadraticDifferential& q,
                                             const WolfOptions& options) {
  // e = 1 unless q is too large for it to be admissible; then 1 + 4|q| (always admissible).
  const ScalarField n = qd_norm(q, mesh);
  ScalarField e0(mesh.face_count(), 1.0);
  bool small = true;
  for (std::size_t f = 0; f < e0.size(); ++f) small = small && 1.0 > 2.0 * n[f] + options.margin;
  if (!small)
    for (std::size_t f = 0; f < e0.size(); ++f) e0[f] = 1.0 + 4.0 * n[f];
  return solve_hyperbolic_from(mesh, q, e0, options);
}

TensorField solve_hyperbolic(const SurfaceMesh& mesh, const QuadraticDifferential& q) {
  return solve_hyperbolic_detailed(mesh, q).h;
}

OperatorField labourie_operator(const TensorField& h, const TensorField& hStar) {
  require_same(h.size(), hStar.size());
  OperatorField b(h.size());
  for (std::size_t f = 0; f < h.size(); ++f) {
    const Eigen::Matrix2d s = spd_sqrt(h[f], "h");
    const Eigen::Matrix2d si = s.inverse();
    const Eigen::Matrix2d m = si * hStar[f] * si;
    b[f] = si * spd_sqrt(m, "h*") * s;
  }
  return b;
}

NormalizedPair make_pair(const TensorField& h, const TensorField& hStar) {
  NormalizedPair p;
  p.h = h;
  p.hStar = hStar;
  p.b = labourie_operator(h, hStar);
  return p;
}

double j_functional(const NormalizedPair& pair, const SurfaceMesh& mesh) {
  ScalarField tr(pair.b.size());
  for (std::size_t f = 0; f < tr.size(); ++f) tr[f] = pair.b[f].trace();
  return integrate(tr, pair.h, mesh);
}

double j_functional_swapped(const NormalizedPair& pair, const SurfaceMesh& mesh) {
  ScalarField tr(pair.b.size());
  for (std::size_t f = 0; f < tr.size(); ++f) tr[f] = pair.b[f].inverse().trace();
  return integrate(tr, pair.hStar, mesh);
}

double length_function(const TensorField& h, const TensorField& hStar, const SurfaceMesh& mesh) {
  return j_functional(make_pair(h, hStar), mesh);
}

KSurface reconstruct_ksurface(const ConfCotangentPoint& point, const WolfOptions& options) {
  if (point.mesh == nullptr) throw Error(ErrorCode::InvalidMesh, "cotangent point has no mesh");
  require_k_in_range(point.k);
  const SurfaceMesh& mesh = *point.mesh;
  require_same(point.q.size(), mesh.face_count());
  const double k = point.k;
  const double r = std::sqrt(k + 1.0);
  const QuadraticDifferential qt = (-k / (2.0 * r)) * point.q;

  const HyperbolicSolution a = solve_hyperbolic_detailed(mesh, qt, options);
  const HyperbolicSolution c = solve_hyperbolic_detailed(mesh, (-1.0) * qt, options);

  KSurface s;
  s.k = k;
  s.pair = make_pair(a.h, c.h);
  s.e = a.e;
  s.eStar = c.e;
  s.iterations = a.iterations + c.iterations;

  TensorField I = (-1.0 / k) * a.h;
  I.metricCandidate = true;
  OperatorField B(mesh.face_count());
  for (std::size_t f = 0; f < B.size(); ++f) B[f] = r * s.pair.b[f];
  s.data = ImmersionData::make(I, B, mesh);

  KSurfaceResiduals& res = s.residuals;
  res.curvature = std::max(a.residual, c.residual);
  res.gauss = gauss_residual(s.data, mesh);
  res.codazzi = codazzi_residual(I, B, mesh);

  TensorField conf = traceless_part(s.data.II, mesh.backgroundMetric);
  res.conformality = l2_norm(tensor_norm(conf, s.data.II), I, mesh);

  const TensorField rq = two_real_part(point.q);
  TensorField d(mesh.face_count());
  ScalarField det(mesh.face_count());
  for (std::size_t f = 0; f < d.size(); ++f) {
    d[f] = rq[f] - 2.0 * r * (I[f] - s.data.H[f] / (2.0 * (k + 1.0)) * s.data.II[f]);
    det[f] = s.data.Ke[f] - (k + 1.0);
  }
  res.eq21 = l2_norm(tensor_norm(d, I), I, mesh);
  res.determinant = l2_norm(det, I, mesh);
  return s;
}

TensorField psi_density(const NormalizedPair& pair, double k) {
  require_k_in_range(k);
  const double c = std::sqrt(k + 1.0) / (2.0 * k);
  const TensorField hb = lower(pair.h, pair.b);
  TensorField p(pair.h.size());
  for (std::size_t f = 0; f < p.size(); ++f) p[f] = c * (hb[f] - pair.b[f].trace() * pair.h[f]);
  return p;
}

HypCotangentPoint psi_point(const KSurface& surface) {
  HypCotangentPoint out;
  out.h = surface.pair.h;
  out.p = psi_density(surface.pair, surface.k);
  out.k = surface.k;
  return out;
}

HypCotangentPoint psi_point(const ConfCotangentPoint& point, const WolfOptions& options) {
  return psi_point(reconstruct_ksurface(point, options));
}

double covector_pairing(const TensorField& p, const TensorField& dh, const TensorField& h, const SurfaceMesh& mesh) {
  return integrate(tensor_inner(dh, p, h), h, mesh);
}

double mean_curvature_integral(const KSurface& s, const SurfaceMesh& mesh) {
  return integrate(s.data.H, s.data.I, mesh);
}

}  // namespace cgc
