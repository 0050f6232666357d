#include "cgc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "cgc/discrete_metric.hpp"
#include "cgc/error.hpp"

namespace cgc {

void require_metric(const TensorField& g, const char* what) {
  for (std::size_t f = 0; f < g.size(); ++f)
    if (!(g[f].determinant() > 0.0 && g[f](0, 0) > 0.0))
      throw Error(ErrorCode::NotPositiveDefinite, std::string(what) + " is not positive definite on face " + std::to_string(f));
}

namespace {

void require_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::MismatchedMesh, "field sizes differ");
}

}  // namespace

namespace {

bool same_map(const Mobius& a, const Mobius& b) {
  const double plus = std::abs(a.a - b.a) + std::abs(a.b - b.b);
  const double minus = std::abs(a.a + b.a) + std::abs(a.b + b.b);
  return std::min(plus, minus) < 1e-9;
}

Eigen::Matrix<double, 1, 10> cubic_basis(Complex d) {
  const double x = d.real(), y = d.imag();
  Eigen::Matrix<double, 1, 10> r;
  r << 1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y;
  return r;
}

// Real matrix of multiplication by a complex number.
Eigen::Matrix2d complex_matrix(Complex z) {
  Eigen::Matrix2d m;
  m << z.real(), -z.imag(), z.imag(), z.real();
  return m;
}

}  // namespace

std::vector<FaceStencil> build_stencils(const SurfaceMesh& mesh) {
  const int nf = static_cast<int>(mesh.face_count());
  std::vector<FaceStencil> out(nf);
  for (int f = 0; f < nf; ++f) {
    FaceStencil& s = out[f];
    const Complex c = to_complex(mesh.centroid(f));
    // Own neighbourhood plus those of the edge-adjacent faces.
    std::vector<NeighbourFace> pool = mesh.neighbourhoods[f];
    for (int side = 0; side < 3; ++side) {
      const QuotientEdge& e = mesh.edges[mesh.faceEdges[f][side]];
      const int here = e.sides[0].face == f ? 0 : 1;
      if (e.sides[here].face != f) continue;
      const Mobius across = here == 0 ? e.transition : e.transition.inverse();
      for (const NeighbourFace& n : mesh.neighbourhoods[e.sides[1 - here].face]) {
        const NeighbourFace cand{n.face, n.transition.compose(across)};
        const bool have = std::any_of(pool.begin(), pool.end(), [&](const NeighbourFace& p) {
          return p.face == cand.face && same_map(p.transition, cand.transition);
        });
        if (!have) pool.push_back(cand);
      }
    }
    s.centring = Mobius::recentre(c);
    const Mobius back = s.centring.inverse();
    const double r2 = std::norm(c);
    s.stretch = 1.0 / (1.0 - r2);
    s.bend = 2.0 * std::conj(c) * s.stretch * s.stretch;
    const double h = std::sqrt(mesh.quadrature[f]) * s.stretch;
    const int n = static_cast<int>(pool.size());
    std::vector<Complex> w(n);
    for (int i = 0; i < n; ++i) {
      s.faces.push_back(pool[i].face);
      s.transitions.push_back(pool[i].transition);
      s.points.push_back(pool[i].transition.inverse()(to_complex(mesh.centroid(pool[i].face))));
      w[i] = s.centring(s.points[i]);
      const Mobius to = pool[i].transition.compose(back);
      s.pulls.push_back(to.jacobian(w[i]));
      s.pullDerivatives.push_back(to.derivative(w[i]));
    }
    if (n < 12) throw Error(ErrorCode::ReconstructionFailure, "neighbourhood of face " + std::to_string(f) + " too small");
    Eigen::MatrixXd A(n, 10);
    for (int i = 0; i < n; ++i) A.row(i) = cubic_basis(w[i] / h);
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    if (cod.rank() < 10) throw Error(ErrorCode::ReconstructionFailure, "degenerate neighbourhood at face " + std::to_string(f));
    const Eigen::MatrixXd pinv = cod.pseudoInverse();
    s.weights = pinv.middleRows(1, 2) / h;
  }
  return out;
}

Eigen::Matrix2d pull_tensor(const FaceStencil& s, std::size_t i, const Eigen::Matrix2d& t) {
  if (i == 0) return t;
  const Eigen::Matrix2d D = s.transitions[i].jacobian(s.points[i]);
  return D.transpose() * t * D;
}

Eigen::Matrix2d pull_operator(const FaceStencil& s, std::size_t i, const Eigen::Matrix2d& b) {
  if (i == 0) return b;
  const Eigen::Matrix2d D = s.transitions[i].jacobian(s.points[i]);
  return D.inverse() * b * D;
}

Complex pull_quadratic(const FaceStencil& s, std::size_t i, Complex phi) {
  if (i == 0) return phi;
  const Complex d = s.transitions[i].derivative(s.points[i]);
  return phi * d * d;
}

// Fields are pulled into the centred chart, differentiated there, and the chain rule through the
// centring map gives root-chart derivatives at the centroid, where its Jacobian is stretch * Id.
std::array<Eigen::Matrix2d, 2> tensor_gradient(const FaceStencil& s, const TensorField& t) {
  std::array<Eigen::Matrix2d, 2> g{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    const Eigen::Matrix2d v = s.pulls[i].transpose() * t[s.faces[i]] * s.pulls[i];
    g[0] += s.weights(0, i) * v;
    g[1] += s.weights(1, i) * v;
  }
  const double k = s.stretch;
  const Eigen::Matrix2d centred = t[s.faces[0]] / (k * k);
  const std::array<Eigen::Matrix2d, 2> dJ{complex_matrix(s.bend), complex_matrix(Complex(0.0, 1.0) * s.bend)};
  std::array<Eigen::Matrix2d, 2> d;
  for (int a = 0; a < 2; ++a) d[a] = k * (dJ[a].transpose() * centred + centred * dJ[a]) + k * k * k * g[a];
  return d;
}

std::array<Eigen::Matrix2d, 2> operator_gradient(const FaceStencil& s, const OperatorField& b) {
  std::array<Eigen::Matrix2d, 2> g{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    const Eigen::Matrix2d v = s.pulls[i].inverse() * b[s.faces[i]] * s.pulls[i];
    g[0] += s.weights(0, i) * v;
    g[1] += s.weights(1, i) * v;
  }
  const double k = s.stretch;
  const Eigen::Matrix2d& centred = b[s.faces[0]];
  const std::array<Eigen::Matrix2d, 2> dJ{complex_matrix(s.bend), complex_matrix(Complex(0.0, 1.0) * s.bend)};
  std::array<Eigen::Matrix2d, 2> d;
  for (int a = 0; a < 2; ++a) d[a] = (centred * dJ[a] - dJ[a] * centred) / k + k * g[a];
  return d;
}

Eigen::Vector2d scalar_gradient(const FaceStencil& s, const ScalarField& f) {
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    d.x() += s.weights(0, i) * f[s.faces[i]];
    d.y() += s.weights(1, i) * f[s.faces[i]];
  }
  return s.stretch * d;
}

std::array<Complex, 2> quadratic_gradient(const FaceStencil& s, const QuadraticDifferential& q) {
  std::array<Complex, 2> g{Complex(0.0, 0.0), Complex(0.0, 0.0)};
  for (std::size_t i = 0; i < s.faces.size(); ++i) {
    const Complex d = s.pullDerivatives[i];
    const Complex v = q[s.faces[i]] * d * d;
    g[0] += s.weights(0, i) * v;
    g[1] += s.weights(1, i) * v;
  }
  const double k = s.stretch;
  const Complex centred = q[s.faces[0]] / (k * k);
  return {k * k * k * g[0] + 2.0 * k * centred * s.bend, k * k * k * g[1] + 2.0 * k * centred * Complex(0.0, 1.0) * s.bend};
}

std::array<Eigen::Matrix2d, 2> christoffel(const Eigen::Matrix2d& g, const std::array<Eigen::Matrix2d, 2>& dg) {
  const Eigen::Matrix2d gi = g.inverse();
  // Lowered symbols: low[d](b, c) = 1/2 (d_b g_dc + d_c g_db - d_d g_bc).
  std::array<Eigen::Matrix2d, 2> low;
  for (int d = 0; d < 2; ++d)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) low[d](b, c) = 0.5 * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
  std::array<Eigen::Matrix2d, 2> out;
  for (int a = 0; a < 2; ++a) out[a] = gi(a, 0) * low[0] + gi(a, 1) * low[1];
  return out;
}

OperatorField shape_operator(const TensorField& I, const TensorField& II) {
  require_size(I.size(), II.size());
  require_metric(I, "first fundamental form");
  OperatorField B(I.size());
  for (std::size_t f = 0; f < I.size(); ++f) {
    B[f] = I[f].inverse() * II[f];
    const Eigen::Matrix2d gb = I[f] * B[f];
    const double scale = std::max(1.0, gb.norm());
    if (std::abs(gb(0, 1) - gb(1, 0)) > 1e-10 * scale)
      throw Error(ErrorCode::NotPositiveDefinite, "shape operator is not self-adjoint on face " + std::to_string(f));
  }
  return B;
}

ScalarField tensor_inner(const TensorField& a, const TensorField& b, const TensorField& g) {
  require_size(a.size(), g.size());
  require_size(b.size(), g.size());
  require_metric(g, "metric");
  ScalarField out(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    const Eigen::Matrix2d gi = g[f].inverse();
    out[f] = (gi * a[f] * gi * b[f]).trace();
  }
  return out;
}

TensorField traceless_part(const TensorField& t, const TensorField& g) {
  require_size(t.size(), g.size());
  require_metric(g, "metric");
  TensorField out(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double tr = (g[f].inverse() * t[f]).trace();
    out[f] = t[f] - 0.5 * tr * g[f];
  }
  return out;
}

TensorField lower(const TensorField& g, const OperatorField& b) {
  require_size(g.size(), b.size());
  TensorField out(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    const Eigen::Matrix2d m = g[f] * b[f];
    out[f] = 0.5 * (m + m.transpose());
  }
  return out;
}

TensorField lower_twice(const TensorField& g, const OperatorField& b) {
  require_size(g.size(), b.size());
  TensorField out(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    const Eigen::Matrix2d m = b[f].transpose() * g[f] * b[f];
    out[f] = 0.5 * (m + m.transpose());
  }
  return out;
}

ScalarField gaussian_curvature(const TensorField& g, const SurfaceMesh& mesh) {
  return discrete_curvature(mesh, g).faceCurvature;
}

double l2_norm(const ScalarField& f, const TensorField& g, const SurfaceMesh& mesh) {
  ScalarField sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return std::sqrt(integrate(sq, g, mesh));
}

ScalarField tensor_norm(const TensorField& t, const TensorField& g) {
  ScalarField out = tensor_inner(t, t, g);
  for (double& v : out.values) v = std::sqrt(std::max(0.0, v));
  return out;
}

ScalarField codazzi_defect(const TensorField& g, const OperatorField& b, const SurfaceMesh& mesh) {
  require_size(g.size(), mesh.face_count());
  require_size(b.size(), mesh.face_count());
  require_metric(g, "metric");
  const std::vector<FaceStencil> st = build_stencils(mesh);
  ScalarField out(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto dg = tensor_gradient(st[f], g);
    const auto db = operator_gradient(st[f], b);
    const auto gam = christoffel(g[f], dg);
    const Eigen::Matrix2d& B = b[f];
    Eigen::Vector2d R;
    for (int a = 0; a < 2; ++a) {
      R[a] = db[0](a, 1) - db[1](a, 0);
      for (int k = 0; k < 2; ++k) R[a] += gam[a](0, k) * B(k, 1) - gam[a](1, k) * B(k, 0);
    }
    out[f] = std::sqrt(std::max(0.0, R.dot(g[f] * R) / g[f].determinant()));
  }
  return out;
}

double codazzi_residual(const TensorField& g, const OperatorField& b, const SurfaceMesh& mesh) {
  return l2_norm(codazzi_defect(g, b, mesh), g, mesh);
}

double divergence_identity_residual(const TensorField& I, const TensorField& II, const SurfaceMesh& mesh) {
  require_size(I.size(), mesh.face_count());
  require_size(II.size(), mesh.face_count());
  require_metric(I, "first fundamental form");
  require_metric(II, "second fundamental form");
  const std::size_t nf = mesh.face_count();
  TensorField T(nf);
  ScalarField logK(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const Eigen::Matrix2d B = I[f].inverse() * II[f];
    const double H = B.trace(), K = B.determinant();
    if (!(K > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "extrinsic curvature not positive on face " + std::to_string(f));
    T[f] = I[f] - (H / (2.0 * K)) * II[f];
    logK[f] = std::log(K);
  }
  const std::vector<FaceStencil> st = build_stencils(mesh);
  ScalarField defect(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto dM = tensor_gradient(st[f], II);
    const auto gam = christoffel(II[f], dM);
    const auto dT = tensor_gradient(st[f], T);
    const Eigen::Matrix2d Mi = II[f].inverse();
    const Eigen::Vector2d dlogK = scalar_gradient(st[f], logK);
    Eigen::Vector2d w;
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
          double cov = dT[k](i, j);
          for (int l = 0; l < 2; ++l) cov -= gam[l](k, i) * T[f](l, j) + gam[l](k, j) * T[f](i, l);
          s += Mi(i, k) * cov;
        }
      w[j] = s + 0.5 * dlogK[j];
    }
    defect[f] = std::sqrt(std::max(0.0, w.dot(Mi * w)));
  }
  return l2_norm(defect, II, mesh);
}

void write_tensor_csv(std::ostream& out, const TensorField& t) {
  out << "face,a11,a12,a22\n";
  char buf[128];
  for (std::size_t f = 0; f < t.size(); ++f) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", f, t[f](0, 0), t[f](0, 1), t[f](1, 1));
    out << buf;
  }
}

void write_tensor_csv(const std::string& path, const TensorField& t) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  write_tensor_csv(out, t);
}

}  // namespace cgc
