#include "cgc/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <Eigen/SparseCholesky>

#include "cgc/error.hpp"
#include "cgc/tensor.hpp"

namespace cgc {

namespace {

double chart_cot(const Eigen::Vector2d& at, const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  const Eigen::Vector2d u = p - at, v = q - at;
  return u.dot(v) / std::abs(u.x() * v.y() - u.y() * v.x());
}

std::vector<double> cotan_weights(const SurfaceMesh& m) {
  std::vector<double> w(m.edges.size(), 0.0);
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    for (const EdgeIncidence& s : m.edges[e].sides) {
      const auto& f = m.faces[s.face];
      const Eigen::Vector2d& at = m.vertices[f[s.local]];
      w[e] += 0.5 * chart_cot(at, m.vertices[f[(s.local + 1) % 3]], m.vertices[f[(s.local + 2) % 3]]);
    }
  return w;
}

/// dz coefficient of a harmonic form at each face centroid: a harmonic quartic is fitted to the local
/// potential over the vertices of the face neighbourhood, and its complex derivative is taken.
constexpr int kPotentialDegree = 4;

std::vector<Complex> holomorphic_coefficients(const SurfaceMesh& m, const OneFormField& form) {
  const std::size_t nf = m.face_count();
  std::vector<Complex> out(nf);
  const std::vector<FaceStencil> st = build_stencils(m);
  for (std::size_t f = 0; f < nf; ++f) {
    std::vector<NeighbourFace> nb;
    for (std::size_t i = 0; i < st[f].faces.size(); ++i) nb.push_back({st[f].faces[i], st[f].transitions[i]});
    std::vector<int> ids;
    std::vector<Complex> pos;
    std::vector<double> pot;
    std::vector<char> known;
    auto slot = [&](int qv, Complex z) {
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == qv) return static_cast<int>(i);
      ids.push_back(qv);
      pos.push_back(z);
      pot.push_back(0.0);
      known.push_back(0);
      return static_cast<int>(ids.size() - 1);
    };
    std::vector<std::array<int, 3>> corner(nb.size());
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const Mobius back = nb[k].transition.inverse();
      const auto z = m.corners(nb[k].face);
      for (int c = 0; c < 3; ++c) corner[k][c] = slot(m.faceVertices[nb[k].face][c], back(z[c]));
    }
    known[corner[0][0]] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const int face = nb[k].face;
        for (int j = 0; j < 3; ++j) {
          const int a = corner[k][(j + 1) % 3], b = corner[k][(j + 2) % 3];
          const double v = m.faceEdgeSigns[face][j] * form.values[m.faceEdges[face][j]];
          if (known[a] && !known[b]) {
            pot[b] = pot[a] + v;
            known[b] = 1;
            changed = true;
          } else if (known[b] && !known[a]) {
            pot[a] = pot[b] - v;
            known[a] = 1;
            changed = true;
          }
        }
      }
    }
    // Harmonic functions stay harmonic in the chart centred at the centroid, where the fit is
    // better conditioned; there the centring map has derivative 1 / (1 - |c|^2).
    const Complex c = to_complex(m.centroid(static_cast<int>(f)));
    const Mobius centring = Mobius::recentre(c);
    const double h = std::sqrt(m.quadrature[f]) / (1.0 - std::norm(c));
    const int n = static_cast<int>(ids.size());
    if (n < 12) throw Error(ErrorCode::ReconstructionFailure, "too few vertices to fit a harmonic potential");
    Eigen::MatrixXd A(n, 2 * kPotentialDegree + 1);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
      const Complex d = centring(pos[i]) / h;
      Complex p(1.0, 0.0);
      A(i, 0) = 1.0;
      for (int k = 1; k <= kPotentialDegree; ++k) {
        p *= d;
        A(i, 2 * k - 1) = p.real();
        A(i, 2 * k) = p.imag();
      }
      rhs[i] = pot[i];
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);
    // U = Re(F) with F = sum beta_k d^k; beta_1 = x1 - i x2 is F'(0) in scaled units.
    out[f] = Complex(x[1], -x[2]) / (h * (1.0 - std::norm(c)));
  }
  return out;
}

}  // namespace

std::vector<OneFormField> harmonic_one_forms(const SurfaceMesh& mesh) {
  const int nv = mesh.quotientVertexCount;
  const std::vector<double> w = cotan_weights(mesh);
  std::vector<Eigen::Triplet<double>> trip;
  trip.emplace_back(0, 0, 1.0);  // fixes the additive constant at vertex 0
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const int a = mesh.edges[e].v0, b = mesh.edges[e].v1;
    if (a == b) continue;
    trip.emplace_back(a, a, w[e]);
    trip.emplace_back(b, b, w[e]);
    trip.emplace_back(a, b, -w[e]);
    trip.emplace_back(b, a, -w[e]);
  }
  Eigen::SparseMatrix<double> L(nv, nv);
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "cotangent Laplacian factorization failed");

  std::vector<OneFormField> out;
  for (const Eigen::VectorXd& gamma : dual_cocycles(mesh)) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
      const int a = mesh.edges[e].v0, b = mesh.edges[e].v1;
      if (a == b) continue;
      rhs[a] += w[e] * gamma[e];
      rhs[b] -= w[e] * gamma[e];
    }
    const Eigen::VectorXd u = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "harmonic projection failed");
    OneFormField f;
    f.values.resize(mesh.edges.size());
    for (std::size_t e = 0; e < mesh.edges.size(); ++e)
      f.values[e] = gamma[e] + u[mesh.edges[e].v1] - u[mesh.edges[e].v0];
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<double> face_boundary_sums(const SurfaceMesh& mesh, const OneFormField& form) {
  std::vector<double> out(mesh.face_count(), 0.0);
  for (std::size_t f = 0; f < mesh.face_count(); ++f)
    for (int j = 0; j < 3; ++j) out[f] += mesh.faceEdgeSigns[f][j] * form.values[mesh.faceEdges[f][j]];
  return out;
}

Eigen::MatrixXd period_matrix(const SurfaceMesh& mesh, const std::vector<OneFormField>& forms) {
  const std::size_t nl = mesh.homologyLoops.size();
  Eigen::MatrixXd P(forms.size(), nl);
  for (std::size_t l = 0; l < nl; ++l) {
    const EdgeLoop& loop = mesh.homologyLoops[l];
    // Walk the chain from the start of its first edge to recover orientations.
    int cur = mesh.edges[loop[0]].v0;
    std::vector<int> sign;
    for (int e : loop) {
      const QuotientEdge& q = mesh.edges[e];
      if (q.v0 == cur) {
        sign.push_back(1);
        cur = q.v1;
      } else {
        sign.push_back(-1);
        cur = q.v0;
      }
    }
    for (std::size_t i = 0; i < forms.size(); ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < loop.size(); ++k) s += sign[k] * forms[i].values[loop[k]];
      P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = s;
    }
  }
  return P;
}

FaceForm face_form(const SurfaceMesh& mesh, const OneFormField& form) {
  const Eigen::Map<const Eigen::VectorXd> c(form.values.data(), static_cast<Eigen::Index>(form.values.size()));
  FaceForm out;
  out.values.resize(mesh.face_count());
  for (std::size_t f = 0; f < mesh.face_count(); ++f) out.values[f] = detail::face_form(mesh, static_cast<int>(f), c);
  return out;
}

FaceForm star(const FaceForm& form) {
  FaceForm out;
  out.values.reserve(form.values.size());
  for (const Eigen::Vector2d& v : form.values) out.values.emplace_back(-v.y(), v.x());
  return out;
}

Complex qd_inner(const QuadraticDifferential& a, const QuadraticDifferential& b, const SurfaceMesh& mesh) {
  Complex s(0.0, 0.0);
  for (std::size_t f = 0; f < mesh.face_count(); ++f)
    s += a[f] * std::conj(b[f]) * mesh.quadrature[f] / mesh.backgroundMetric[f](0, 0);
  return s;
}

QdBasis holomorphic_qd_basis(const SurfaceMesh& mesh) {
  const std::size_t nf = mesh.face_count();
  const std::vector<OneFormField> forms = harmonic_one_forms(mesh);
  // omega = alpha + i * star(alpha) has the dz coefficient a - i b for alpha = a dx + b dy.
  std::vector<std::vector<Complex>> omega;
  for (const OneFormField& f : forms) omega.push_back(holomorphic_coefficients(mesh, f));
  const int n = static_cast<int>(omega.size());
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t f = 0; f < nf; ++f) s += omega[i][f] * std::conj(omega[j][f]) * mesh.quadrature[f];
      G(i, j) = s;
    }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eg(G);
  QdBasis out;
  out.oneFormGramEigenvalues = Eigen::Vector2d(eg.eigenvalues()[n - 1], eg.eigenvalues()[n - 2]);
  std::array<std::vector<Complex>, 2> eta;
  for (int k = 0; k < 2; ++k) {
    const Eigen::VectorXcd c = eg.eigenvectors().col(n - 1 - k);
    eta[k].assign(nf, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i)
      for (std::size_t f = 0; f < nf; ++f) eta[k][f] += std::conj(c[i]) * omega[i][f];
  }

  std::array<QuadraticDifferential, 3> prod{QuadraticDifferential(nf), QuadraticDifferential(nf), QuadraticDifferential(nf)};
  for (std::size_t f = 0; f < nf; ++f) {
    prod[0][f] = eta[0][f] * eta[0][f];
    prod[1][f] = eta[0][f] * eta[1][f];
    prod[2][f] = eta[1][f] * eta[1][f];
  }
  Eigen::Matrix3cd P;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P(i, j) = qd_inner(prod[i], prod[j], mesh);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> ep(P);
  for (int k = 0; k < 3; ++k) out.gramEigenvalues[k] = ep.eigenvalues()[2 - k];
  if (!(out.gramEigenvalues[2] > 1e-12 * out.gramEigenvalues[0]))
    throw Error(ErrorCode::RankDeficient, "products of holomorphic 1-forms do not span three dimensions");
  out.gramCondition = out.gramEigenvalues[0] / out.gramEigenvalues[2];

  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3cd c = ep.eigenvectors().col(2 - k);
    QuadraticDifferential q(nf);
    for (int i = 0; i < 3; ++i)
      for (std::size_t f = 0; f < nf; ++f) q[f] += std::conj(c[i]) * prod[i][f];
    const double norm = std::sqrt(qd_inner(q, q, mesh).real());
    std::size_t big = 0;
    for (std::size_t f = 1; f < nf; ++f)
      if (std::abs(q[f]) > std::abs(q[big])) big = f;
    const Complex phase = std::conj(q[big]) / std::abs(q[big]);
    for (std::size_t f = 0; f < nf; ++f) q[f] *= phase / norm;
    out.elements[k] = std::move(q);
  }
  return out;
}

double holomorphy_residual(const QuadraticDifferential& q, const SurfaceMesh& mesh) {
  if (q.size() != mesh.face_count()) throw Error(ErrorCode::MismatchedMesh, "quadratic differential size mismatch");
  const std::vector<FaceStencil> st = build_stencils(mesh);
  double sum = 0.0;
  for (std::size_t f = 0; f < q.size(); ++f) {
    const FaceStencil& s = st[f];
    const auto [dx, dy] = quadratic_gradient(s, q);
    const Complex dbar = 0.5 * (dx + Complex(0.0, 1.0) * dy);
    const double lam2 = mesh.backgroundMetric[f](0, 0);
    sum += std::norm(dbar) / (lam2 * lam2) * mesh.quadrature[f];
  }
  return std::sqrt(sum);
}

double equivariance_ratio(const QuadraticDifferential& q, const SurfaceMesh& mesh) {
  double side = 0.0, interior = 0.0;
  for (const QuotientEdge& e : mesh.edges) {
    const int a = e.sides[0].face, b = e.sides[1].face;
    const Eigen::Vector2d ca = mesh.centroid(a);
    const Complex d = e.transition.derivative(to_complex(ca));
    // phi_b dw^2 with w = T(z) reads phi_b T'(z)^2 dz^2 in the chart of a.
    const double jump = std::abs(q[b] * d * d - q[a]);
    const bool paired = std::abs(e.transition.b) > 0.0;
    (paired ? side : interior) = std::max(paired ? side : interior, jump);
  }
  return interior > 0.0 ? side / interior : 0.0;
}

QuadraticDifferential conjugate(const QuadraticDifferential& q) {
  QuadraticDifferential out(q.size());
  for (std::size_t f = 0; f < q.size(); ++f) out[f] = std::conj(q[f]);
  return out;
}

void write_basis_csv(std::ostream& out, const QuadraticDifferential& q) {
  out << "face,RePhi,ImPhi\n";
  char buf[128];
  for (std::size_t f = 0; f < q.size(); ++f) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", f, q[f].real(), q[f].imag());
    out << buf;
  }
}

void write_basis_csv(const std::string& path, const QuadraticDifferential& q) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  write_basis_csv(out, q);
}

}  // namespace cgc
