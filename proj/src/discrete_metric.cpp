#include "cgc/discrete_metric.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <Eigen/SparseCholesky>

#include "cgc/error.hpp"

namespace cgc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Forward-mode derivative carrier for the edge-length kernel.
struct Dual {
  double v = 0.0, d = 0.0;
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }
Dual operator*(Dual a, double s) { return {s * a.v, s * a.d}; }
Dual sqrt(Dual a) {
  const double r = std::sqrt(a.v);
  return {r, 0.5 * a.d / r};
}
double value_of(double x) { return x; }
double value_of(Dual x) { return x.v; }

template <class T>
struct Sym {
  T xx, xy, yy;
};

template <class T>
T quad(const Sym<T>& g, double ex, double ey) {
  return ex * ex * g.xx + 2.0 * ex * ey * g.xy + ey * ey * g.yy;
}

/// Squared geodesic length between the edge ends: Simpson rule along the chart segment, minus the
/// chord correction for the geodesic curvature of that segment.
template <class T>
T side_length_sq(const std::array<Sym<T>, 5>& G, const Eigen::Vector2d& E, int face) {
  using std::sqrt;
  const double ex = E.x(), ey = E.y();
  const T qa = quad(G[0], ex, ey), qm = quad(G[1], ex, ey), qb = quad(G[2], ex, ey);
  if (!(value_of(qa) > 0.0 && value_of(qm) > 0.0 && value_of(qb) > 0.0))
    throw Error(ErrorCode::NotPositiveDefinite, "edge metric not positive near face " + std::to_string(face));
  const T len = (1.0 / 6.0) * (sqrt(qa) + 4.0 * sqrt(qm) + sqrt(qb));
  // Lowered acceleration g(Gamma(E, E), .) of the straight segment at the midpoint.
  const Sym<T>& gx = G[3];
  const Sym<T>& gy = G[4];
  const T dEx = quad(gx, ex, ey), dEy = quad(gy, ex, ey);
  // (dg_b)_{dc} E^b E^c for d = x, y.
  const T dx_x = ex * (ex * gx.xx + ey * gx.xy) + ey * (ex * gy.xx + ey * gy.xy);
  const T dx_y = ex * (ex * gx.xy + ey * gx.yy) + ey * (ex * gy.xy + ey * gy.yy);
  const T nx = dx_x - 0.5 * dEx;
  const T ny = dx_y - 0.5 * dEy;
  const Sym<T>& g = G[1];
  const T det = g.xx * g.yy - g.xy * g.xy;
  const T nn = (g.yy * nx * nx - 2.0 * g.xy * nx * ny + g.xx * ny * ny) / det;
  const T ne = nx * ex + ny * ey;
  const T perp = nn - ne * ne / qm;
  const T kappa2 = perp / (qm * qm);
  const T geo = len - (1.0 / 24.0) * len * len * len * kappa2;
  return geo * geo;
}

template <class T>
Sym<T> accumulate(const Sym<T>& s, double w, const Eigen::Matrix2d& m) {
  return {s.xx + w * m(0, 0), s.xy + w * m(0, 1), s.yy + w * m(1, 1)};
}

std::array<Sym<double>, 5> sample_side(const EdgeStencil& es, const TensorField& g) {
  std::array<Sym<double>, 5> G{};
  for (std::size_t i = 0; i < es.faces.size(); ++i) {
    const Eigen::Matrix2d pulled = es.pulls[i].transpose() * g[es.faces[i]] * es.pulls[i];
    for (int p = 0; p < 5; ++p) G[p] = accumulate(G[p], es.weights(p, static_cast<Eigen::Index>(i)), pulled);
  }
  return G;
}

}  // namespace

std::vector<double> edge_lengths_squared(const SurfaceMesh& m, const TensorField& g) {
  std::vector<double> len(m.edges.size(), 0.0);
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    for (int s = 0; s < 2; ++s) {
      const EdgeStencil& es = m.edgeStencils[e][s];
      len[e] += 0.5 * side_length_sq(sample_side(es, g), es.edge, m.edges[e].sides[s].face);
    }
  return len;
}

namespace {

/// d len_e / d e_f for faces f in the edge stencils when g moves along `direction` face-wise.
std::vector<std::pair<int, double>> edge_length_derivatives(const SurfaceMesh& m, std::size_t e, const TensorField& g,
                                                            const TensorField& direction) {
  std::vector<std::pair<int, double>> out;
  for (int s = 0; s < 2; ++s) {
    const EdgeStencil& es = m.edgeStencils[e][s];
    const std::array<Sym<double>, 5> base = sample_side(es, g);
    for (std::size_t i = 0; i < es.faces.size(); ++i) {
      const Eigen::Matrix2d dm = es.pulls[i].transpose() * direction[es.faces[i]] * es.pulls[i];
      std::array<Sym<Dual>, 5> G;
      for (int p = 0; p < 5; ++p) {
        const double w = es.weights(p, static_cast<Eigen::Index>(i));
        G[p] = {{base[p].xx, w * dm(0, 0)}, {base[p].xy, w * dm(0, 1)}, {base[p].yy, w * dm(1, 1)}};
      }
      out.emplace_back(es.faces[i], 0.5 * side_length_sq(G, es.edge, m.edges[e].sides[s].face).d);
    }
  }
  return out;
}

struct FaceAngles {
  std::array<double, 3> theta;
  std::array<std::array<double, 3>, 3> dtheta;  // d theta_i / d x_j
};

FaceAngles face_angles(const std::array<double, 3>& x, int face) {
  const double h16 = 2.0 * (x[0] * x[1] + x[1] * x[2] + x[2] * x[0]) - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (!(h16 > 0.0) || x[0] <= 0.0 || x[1] <= 0.0 || x[2] <= 0.0)
    throw Error(ErrorCode::DegenerateTriangle, "triangle inequality fails on face " + std::to_string(face));
  const double area = 0.25 * std::sqrt(h16);
  FaceAngles out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    out.theta[i] = std::atan2(4.0 * area, x[j] + x[k] - x[i]);
    out.dtheta[i][i] = 1.0 / (4.0 * area);
    out.dtheta[i][j] = -(x[i] + x[j] - x[k]) / (8.0 * area * x[j]);
    out.dtheta[i][k] = -(x[i] + x[k] - x[j]) / (8.0 * area * x[k]);
  }
  return out;
}

void check_sizes(const SurfaceMesh& m, const TensorField& g) {
  if (g.size() != m.face_count()) throw Error(ErrorCode::MismatchedMesh, "tensor field size does not match mesh");
}

}  // namespace

DiscreteCurvature discrete_curvature(const SurfaceMesh& mesh, const TensorField& g) {
  check_sizes(mesh, g);
  const int nv = mesh.quotientVertexCount;
  const int nf = static_cast<int>(mesh.face_count());
  const std::vector<double> len = edge_lengths_squared(mesh, g);
  DiscreteCurvature out;
  out.angleSum.assign(nv, 0.0);
  out.vertexArea.assign(nv, 0.0);
  for (int f = 0; f < nf; ++f) {
    const double det = g[f].determinant();
    if (!(det > 0.0 && g[f](0, 0) > 0.0))
      throw Error(ErrorCode::NotPositiveDefinite, "metric not positive definite on face " + std::to_string(f));
    const std::array<double, 3> x{len[mesh.faceEdges[f][0]], len[mesh.faceEdges[f][1]], len[mesh.faceEdges[f][2]]};
    const FaceAngles a = face_angles(x, f);
    const double third = std::sqrt(det) * mesh.quadrature[f] / 3.0;
    for (int c = 0; c < 3; ++c) {
      out.angleSum[mesh.faceVertices[f][c]] += a.theta[c];
      out.vertexArea[mesh.faceVertices[f][c]] += third;
    }
  }
  out.vertexCurvature.resize(nv);
  for (int v = 0; v < nv; ++v) out.vertexCurvature[v] = (kTwoPi - out.angleSum[v]) / out.vertexArea[v];
  out.faceCurvature = ScalarField(nf);
  for (int f = 0; f < nf; ++f) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += out.vertexCurvature[mesh.faceVertices[f][c]];
    out.faceCurvature[f] = s / 3.0;
  }
  return out;
}

double curvature_residual(const SurfaceMesh& mesh, const TensorField& g, double target) {
  const DiscreteCurvature k = discrete_curvature(mesh, g);
  double s = 0.0;
  for (std::size_t v = 0; v < k.vertexCurvature.size(); ++v) {
    const double d = k.vertexCurvature[v] - target;
    s += d * d * k.vertexArea[v];
  }
  return std::sqrt(s);
}

TensorField ConformalFamily::metric(const ScalarField& e) const {
  TensorField g(mesh->face_count(), true);
  for (std::size_t f = 0; f < g.size(); ++f) g[f] = fixed[f] + e[f] * conformal[f];
  return g;
}

Eigen::VectorXd ConformalFamily::residual(const ScalarField& e, double target) const {
  const DiscreteCurvature k = discrete_curvature(*mesh, metric(e));
  Eigen::VectorXd r(k.vertexCurvature.size());
  for (Eigen::Index v = 0; v < r.size(); ++v) r[v] = k.vertexCurvature[v] - target;
  return r;
}

Eigen::SparseMatrix<double> ConformalFamily::jacobian(const ScalarField& e) const {
  const SurfaceMesh& m = *mesh;
  const TensorField g = metric(e);
  const DiscreteCurvature k = discrete_curvature(m, g);
  const std::vector<double> len = edge_lengths_squared(m, g);
  const int nv = m.quotientVertexCount;
  const int nf = static_cast<int>(m.face_count());

  std::vector<std::vector<std::pair<int, double>>> dlen(m.edges.size());
  for (std::size_t q = 0; q < m.edges.size(); ++q) dlen[q] = edge_length_derivatives(m, q, g, conformal);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nf) * 400);
  for (int h = 0; h < nf; ++h) {
    const std::array<double, 3> x{len[m.faceEdges[h][0]], len[m.faceEdges[h][1]], len[m.faceEdges[h][2]]};
    const FaceAngles a = face_angles(x, h);
    for (int c = 0; c < 3; ++c) {
      const int v = m.faceVertices[h][c];
      const double scale = -1.0 / k.vertexArea[v];
      for (int i = 0; i < 3; ++i) {
        const int q = m.faceEdges[h][i];
        for (const auto& [face, d] : dlen[q]) trip.emplace_back(v, face, scale * a.dtheta[c][i] * d);
      }
    }
  }
  for (int f = 0; f < nf; ++f) {
    const double sq = std::sqrt(g[f].determinant());
    const double dA = 0.5 * (g[f].inverse() * conformal[f]).trace() * sq * m.quadrature[f] / 3.0;
    for (int v : m.faceVertices[f]) trip.emplace_back(v, f, -k.vertexCurvature[v] * dA / k.vertexArea[v]);
  }
  Eigen::SparseMatrix<double> J(nv, nf);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

bool admissible(const ConformalFamily& fam, const ScalarField& e, double margin) {
  for (std::size_t f = 0; f < e.size(); ++f) {
    const Eigen::Matrix2d M = fam.conformal[f].inverse() * (fam.fixed[f] + e[f] * fam.conformal[f]);
    const double half = 0.5 * M.trace();
    const double disc = std::max(0.0, half * half - M.determinant());
    if (!(half - std::sqrt(disc) > margin)) return false;
  }
  return true;
}

namespace {

constexpr double kStepTolerance = 1e-10;
constexpr double kStepAccept = 1e-6;

double weighted_norm(const Eigen::VectorXd& r, const std::vector<double>& area) {
  double s = 0.0;
  for (Eigen::Index v = 0; v < r.size(); ++v) s += r[v] * r[v] * area[v];
  return std::sqrt(s);
}

/// Combinatorial Laplacian of the dual graph (faces adjacent across edges).
Eigen::SparseMatrix<double> dual_laplacian(const SurfaceMesh& m) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const QuotientEdge& e : m.edges) {
    const int a = e.sides[0].face, b = e.sides[1].face;
    trip.emplace_back(a, a, 1.0);
    trip.emplace_back(b, b, 1.0);
    trip.emplace_back(a, b, -1.0);
    trip.emplace_back(b, a, -1.0);
  }
  const int nf = static_cast<int>(m.face_count());
  Eigen::SparseMatrix<double> L(nf, nf);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

}  // namespace

ConformalSolveResult solve_constant_curvature(const ConformalFamily& family, ScalarField e, double target,
                                              const ConformalSolveOptions& options) {
  const SurfaceMesh& m = *family.mesh;
  const int nf = static_cast<int>(m.face_count());
  const int nv = m.quotientVertexCount;
  if (static_cast<int>(e.size()) != nf) throw Error(ErrorCode::MismatchedMesh, "initial factor has wrong size");
  if (!admissible(family, e, options.admissibilityMargin))
    throw Error(ErrorCode::PositivityLoss, "initial guess is not admissible");

  auto evaluate = [&](const ScalarField& x, Eigen::VectorXd& r) {
    const DiscreteCurvature k = discrete_curvature(m, family.metric(x));
    r.resize(k.vertexCurvature.size());
    for (Eigen::Index v = 0; v < r.size(); ++v) r[v] = k.vertexCurvature[v] - target;
    return weighted_norm(r, k.vertexArea);
  };
  const Eigen::SparseMatrix<double> L = dual_laplacian(m);


  Eigen::VectorXd r;
  double norm = evaluate(e, r);
  int it = 0;
  ScalarField best;
  double bestStep = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (;;) {
    const Eigen::SparseMatrix<double> J = family.jacobian(e);
    const Eigen::Map<const Eigen::VectorXd> ev(e.values.data(), nf);
    // KKT system of min 1/2 (e+d)^T L (e+d) subject to J d = -r, in symmetric quasi-definite form:
    // a proximal term on d and a tiny constraint regularization make LDL^T stable; iterative
    // refinement against the exact system removes the bias.
    const double prox = 1e-10, reg = 1e-12;
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < L.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator i(L, c); i; ++i) trip.emplace_back(i.row(), i.col(), i.value());
    for (int c = 0; c < J.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator i(J, c); i; ++i) {
        trip.emplace_back(nf + i.row(), i.col(), i.value());
        trip.emplace_back(i.col(), nf + i.row(), i.value());
      }
    Eigen::SparseMatrix<double> K(nf + nv, nf + nv);
    K.setFromTriplets(trip.begin(), trip.end());
    for (int i = 0; i < nf; ++i) trip.emplace_back(i, i, prox);
    for (int i = 0; i < nv; ++i) trip.emplace_back(nf + i, nf + i, -reg);
    Eigen::SparseMatrix<double> Kreg(nf + nv, nf + nv);
    Kreg.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd rhs(nf + nv);
    rhs.head(nf) = -(L * ev);
    rhs.tail(nv) = -r;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(Kreg);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "singular KKT system");
    Eigen::VectorXd sol = ldlt.solve(rhs);
    for (int refine = 0; refine < 3; ++refine) sol += ldlt.solve(rhs - K * sol);
    const Eigen::VectorXd step = sol.head(nf);
    const double stepSize = step.lpNorm<Eigen::Infinity>();
    if (norm <= options.tolerance) {
      // Feasible: keep refining smoothness until the update stops shrinking.
      if (stepSize <= kStepTolerance) break;
      if (stepSize < bestStep) {
        best = e;
        bestStep = stepSize;
        growth = 0;
      } else if (++growth >= 3) {
        e = best;
        norm = evaluate(e, r);
        break;
      }
    }
    if (it >= options.maxIterations) {
      if (bestStep < kStepAccept) {
        e = best;
        norm = evaluate(e, r);
        break;
      }
      throw Error(ErrorCode::NonConvergence, "Newton did not converge, residual " + std::to_string(norm));
    }
    ++it;
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      ScalarField trial(e);
      for (int f = 0; f < nf; ++f) trial[f] += t * step[f];
      if (!admissible(family, trial, options.admissibilityMargin)) continue;
      Eigen::VectorXd rt;
      double nt;
      try {
        nt = evaluate(trial, rt);
      } catch (const Error&) {
        continue;
      }
      // Feasible iterates may trade a tiny constraint increase for smoothness.
      if (nt < norm || nt <= std::max(10.0 * options.tolerance, 2.0 * norm)) {
        e = std::move(trial);
        r = std::move(rt);
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!admissible(family, e, options.admissibilityMargin))
        throw Error(ErrorCode::PositivityLoss, "iterate left the admissible set");
      throw Error(ErrorCode::PositivityLoss, "damped step cannot stay admissible, residual " + std::to_string(norm));
    }
  }
  ConformalSolveResult out;
  out.metric = family.metric(e);
  out.factor = std::move(e);
  out.iterations = it;
  out.residual = norm;
  return out;
}

TensorField uniformize(const SurfaceMesh& mesh, const TensorField& initial) {
  ConformalFamily fam;
  fam.mesh = &mesh;
  fam.fixed = TensorField(mesh.face_count());
  fam.conformal = initial;
  ConformalSolveOptions opt;
  opt.tolerance = 1e-13 * std::sqrt(static_cast<double>(mesh.face_count()));
  const ConformalSolveResult res = solve_constant_curvature(fam, ScalarField(mesh.face_count(), 1.0), -1.0, opt);
  TensorField out = res.metric;
  out.metricCandidate = true;
  return out;
}

}  // namespace cgc
