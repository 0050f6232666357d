#include "cgc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <numeric>
#include <utility>

#include "cgc/discrete_metric.hpp"
#include "cgc/error.hpp"
#include "cgc/tensor.hpp"

namespace cgc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMatchTol = 1e-9;

using EdgeKey = std::pair<int, int>;

EdgeKey key_of(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double corner_radius() {
  const double c = 1.0 / std::tan(kPi / 8.0);
  return std::tanh(std::acosh(c * c) / 2.0);
}

double inradius() { return std::acosh(1.0 / std::tan(kPi / 8.0)); }

int side_of_boundary_edge(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  const Eigen::Vector2d m = 0.5 * (p + q);
  const double angle = std::atan2(m.y(), m.x());
  const int s = static_cast<int>(std::lround(angle / (kPi / 4.0)));
  return ((s % 8) + 8) % 8;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

Mobius edge_transition(const SurfaceMesh& m, int face, int local) {
  const QuotientEdge& e = m.edges[m.faceEdges[face][local]];
  if (e.sides[0].face == face && e.sides[0].local == local) return e.transition;
  return e.transition.inverse();
}

int across(const SurfaceMesh& m, int face, int local) {
  const QuotientEdge& e = m.edges[m.faceEdges[face][local]];
  if (e.sides[0].face == face && e.sides[0].local == local) return e.sides[1].face;
  return e.sides[0].face;
}

void build_quotient(SurfaceMesh& m) {
  const int nv = static_cast<int>(m.vertices.size());
  const int nf = static_cast<int>(m.faces.size());

  std::map<EdgeKey, int> uses;
  for (const auto& f : m.faces)
    for (int i = 0; i < 3; ++i) ++uses[key_of(f[(i + 1) % 3], f[(i + 2) % 3])];

  // Boundary vertices grouped by the sides they lie on.
  std::vector<std::vector<int>> sideVertices(8);
  std::map<EdgeKey, int> boundarySide;
  for (const auto& [k, n] : uses) {
    if (n == 2) continue;
    if (n != 1) throw Error(ErrorCode::InvalidMesh, "edge shared by more than two faces");
    const int s = side_of_boundary_edge(m.vertices[k.first], m.vertices[k.second]);
    boundarySide[k] = s;
    sideVertices[s].push_back(k.first);
    sideVertices[s].push_back(k.second);
  }
  for (auto& sv : sideVertices) {
    std::sort(sv.begin(), sv.end());
    sv.erase(std::unique(sv.begin(), sv.end()), sv.end());
  }

  auto image_vertex = [&](int v, int side) {
    const SidePairing& p = m.sidePairings[side];
    const Complex z = p.map(to_complex(m.vertices[v]));
    for (int w : sideVertices[p.partner])
      if (std::abs(to_complex(m.vertices[w]) - z) < kMatchTol) return w;
    throw Error(ErrorCode::InvalidMesh, "side pairing does not match boundary vertices");
  };

  UnionFind uf(nv);
  std::map<EdgeKey, std::pair<EdgeKey, int>> partnerEdge;  // boundary edge -> (image edge, side)
  std::map<EdgeKey, std::pair<int, int>> imageOf;           // boundary edge -> images of (first, second)
  for (const auto& [k, s] : boundarySide) {
    const int a = image_vertex(k.first, s);
    const int b = image_vertex(k.second, s);
    if (!boundarySide.count(key_of(a, b)))
      throw Error(ErrorCode::InvalidMesh, "image of a boundary edge is not a boundary edge");
    uf.unite(k.first, a);
    uf.unite(k.second, b);
    partnerEdge[k] = {key_of(a, b), s};
    imageOf[k] = {a, b};
  }

  m.quotientVertex.assign(nv, -1);
  std::vector<int> rootId(nv, -1);
  m.quotientVertexCount = 0;
  for (int v = 0; v < nv; ++v) {
    const int r = uf.find(v);
    if (rootId[r] < 0) rootId[r] = m.quotientVertexCount++;
    m.quotientVertex[v] = rootId[r];
  }

  m.faceVertices.assign(nf, {});
  m.faceEdges.assign(nf, {});
  m.faceEdgeSigns.assign(nf, {});
  m.edges.clear();
  std::map<EdgeKey, int> edgeId;
  std::map<EdgeKey, std::pair<int, int>> firstImage;  // key -> (image of first traversal start, end)

  for (int f = 0; f < nf; ++f) {
    for (int i = 0; i < 3; ++i) m.faceVertices[f][i] = m.quotientVertex[m.faces[f][i]];
    for (int i = 0; i < 3; ++i) {
      const int a = m.faces[f][(i + 1) % 3];
      const int b = m.faces[f][(i + 2) % 3];
      const EdgeKey k = key_of(a, b);
      auto it = edgeId.find(k);
      if (it == edgeId.end()) {
        QuotientEdge e;
        e.v0 = m.quotientVertex[a];
        e.v1 = m.quotientVertex[b];
        e.sides[0] = {f, i, 1};
        const int id = static_cast<int>(m.edges.size());
        edgeId[k] = id;
        auto bs = boundarySide.find(k);
        if (bs == boundarySide.end()) {
          firstImage[k] = {a, b};
        } else {
          const auto& [pk, side] = partnerEdge[k];
          e.transition = m.sidePairings[side].map;
          const auto& img = imageOf[k];
          const bool forward = (k.first == a);
          firstImage[pk] = forward ? img : std::pair<int, int>{img.second, img.first};
          edgeId[pk] = id;
        }
        m.edges.push_back(e);
        m.faceEdges[f][i] = id;
        m.faceEdgeSigns[f][i] = 1;
      } else {
        const int id = it->second;
        QuotientEdge& e = m.edges[id];
        if (e.sides[1].face >= 0) throw Error(ErrorCode::InvalidMesh, "quotient edge used three times");
        const auto& img = firstImage[k];
        const int sign = (img.first == a && img.second == b) ? 1 : -1;
        if (sign != -1) throw Error(ErrorCode::InvalidMesh, "inconsistent orientation across an edge");
        e.sides[1] = {f, i, sign};
        m.faceEdges[f][i] = id;
        m.faceEdgeSigns[f][i] = sign;
      }
    }
  }
  for (const auto& e : m.edges)
    if (e.sides[1].face < 0) throw Error(ErrorCode::InvalidMesh, "unpaired edge");
}

void build_neighbourhoods(SurfaceMesh& m) {
  const int nf = static_cast<int>(m.faces.size());
  m.neighbourhoods.assign(nf, {});
  for (int f = 0; f < nf; ++f) {
    std::vector<NeighbourFace>& out = m.neighbourhoods[f];
    out.push_back({f, Mobius::identity()});
    for (int c = 0; c < 3; ++c) {
      const int qv = m.faceVertices[f][c];
      std::vector<int> seen{f};
      std::deque<NeighbourFace> queue{{f, Mobius::identity()}};
      while (!queue.empty()) {
        const NeighbourFace cur = queue.front();
        queue.pop_front();
        for (int j = 0; j < 3; ++j) {
          if (m.faceVertices[cur.face][(j + 1) % 3] != qv && m.faceVertices[cur.face][(j + 2) % 3] != qv) continue;
          const int g = across(m, cur.face, j);
          if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
          seen.push_back(g);
          const NeighbourFace next{g, edge_transition(m, cur.face, j).compose(cur.transition)};
          queue.push_back(next);
          const bool have = std::any_of(out.begin(), out.end(), [&](const NeighbourFace& n) { return n.face == g; });
          if (!have) out.push_back(next);
        }
      }
    }
  }
}

bool same_map(const Mobius& a, const Mobius& b) {
  const double plus = std::abs(a.a - b.a) + std::abs(a.b - b.b);
  const double minus = std::abs(a.a + b.a) + std::abs(a.b + b.b);
  return std::min(plus, minus) < 1e-9;
}

Eigen::RowVectorXd monomials(Complex d, int degree) {
  Eigen::RowVectorXd r((degree + 1) * (degree + 2) / 2);
  int c = 0;
  for (int n = 0; n <= degree; ++n)
    for (int j = 0; j <= n; ++j) r(c++) = std::pow(d.real(), n - j) * std::pow(d.imag(), j);
  return r;
}

// Cubic least-squares fit over the neighbourhoods of both faces of an edge, sampled along the
// edge; lengths then carry the accuracy the angle defect needs.
void build_edge_stencils(SurfaceMesh& m) {
  m.edgeStencils.assign(m.edges.size(), {});
  const bool fitted = m.level >= 1;
  for (std::size_t q = 0; q < m.edges.size(); ++q) {
    for (int side = 0; side < 2; ++side) {
      const EdgeIncidence& inc = m.edges[q].sides[side];
      EdgeStencil& es = m.edgeStencils[q][side];
      const auto& v = m.faces[inc.face];
      const Eigen::Vector2d pa = m.vertices[v[(inc.local + 1) % 3]];
      const Eigen::Vector2d pb = m.vertices[v[(inc.local + 2) % 3]];
      es.edge = pb - pa;
      if (!fitted) {
        es.faces = {inc.face};
        es.pulls = {Eigen::Matrix2d::Identity()};
        es.weights.setZero(5, 1);
        es.weights.block<3, 1>(0, 0).setOnes();
        continue;
      }
      const Mobius across = side == 0 ? m.edges[q].transition : m.edges[q].transition.inverse();
      std::vector<NeighbourFace> pool = m.neighbourhoods[inc.face];
      for (const NeighbourFace& n : m.neighbourhoods[m.edges[q].sides[1 - side].face]) {
        const NeighbourFace c{n.face, n.transition.compose(across)};
        const bool have = std::any_of(pool.begin(), pool.end(), [&](const NeighbourFace& p) {
          return p.face == c.face && same_map(p.transition, c.transition);
        });
        if (!have) pool.push_back(c);
      }
      // Fit in the chart where the edge's geodesic midpoint is the origin, so that the metric is
      // equally smooth everywhere in the disk.
      const Mobius centre = Mobius::recentre(geodesic_midpoint(to_complex(pa), to_complex(pb)));
      const Mobius back = centre.inverse();
      const Complex wa = centre(to_complex(pa)), wb = centre(to_complex(pb));
      es.edge = to_vec(wb - wa);
      const double scale = es.edge.norm();
      const int n = static_cast<int>(pool.size());
      std::vector<Complex> pts(n);
      for (int i = 0; i < n; ++i)
        pts[i] = centre(pool[i].transition.inverse()(to_complex(m.centroid(pool[i].face))));
      Eigen::MatrixXd pinv;
      int degree = 3;
      for (; degree >= 2; --degree) {
        const int nb = (degree + 1) * (degree + 2) / 2;
        if (n < nb + 2) continue;
        Eigen::MatrixXd A(n, nb);
        for (int i = 0; i < n; ++i) A.row(i) = monomials(pts[i] / scale, degree);
        const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
        if (cod.rank() < nb) continue;
        pinv = cod.pseudoInverse();
        break;
      }
      if (degree < 2) throw Error(ErrorCode::ReconstructionFailure, "degenerate edge neighbourhood");
      es.faces.resize(n);
      es.weights.resize(5, n);
      es.weights.row(0) = monomials(wa / scale, degree) * pinv;
      es.weights.row(1) = pinv.row(0);
      es.weights.row(2) = monomials(wb / scale, degree) * pinv;
      es.weights.row(3) = pinv.row(1) / scale;
      es.weights.row(4) = pinv.row(2) / scale;
      for (int i = 0; i < n; ++i) {
        es.faces[i] = pool[i].face;
        es.pulls.push_back(pool[i].transition.compose(back).jacobian(pts[i]));
      }
    }
  }
}

void subdivide(SurfaceMesh& m) {
  std::map<EdgeKey, int> mid;
  std::vector<std::array<int, 3>> next;
  next.reserve(m.faces.size() * 4);
  auto midpoint = [&](int a, int b) {
    const EdgeKey k = key_of(a, b);
    auto it = mid.find(k);
    if (it != mid.end()) return it->second;
    const Complex p = geodesic_midpoint(to_complex(m.vertices[k.first]), to_complex(m.vertices[k.second]));
    const int id = static_cast<int>(m.vertices.size());
    m.vertices.push_back(to_vec(p));
    mid[k] = id;
    return id;
  };
  for (const auto& f : m.faces) {
    const int ab = midpoint(f[0], f[1]);
    const int bc = midpoint(f[1], f[2]);
    const int ca = midpoint(f[2], f[0]);
    next.push_back({f[0], ab, ca});
    next.push_back({ab, f[1], bc});
    next.push_back({ca, bc, f[2]});
    next.push_back({ab, bc, ca});
  }
  m.faces = std::move(next);
}

}  // namespace


int SurfaceMesh::euler_characteristic() const {
  return quotientVertexCount - static_cast<int>(edges.size()) + static_cast<int>(faces.size());
}

Eigen::Vector2d SurfaceMesh::centroid(int face) const {
  const auto& f = faces[face];
  return (vertices[f[0]] + vertices[f[1]] + vertices[f[2]]) / 3.0;
}

std::array<Complex, 3> SurfaceMesh::corners(int face) const {
  const auto& f = faces[face];
  return {to_complex(vertices[f[0]]), to_complex(vertices[f[1]]), to_complex(vertices[f[2]])};
}

double poincare_factor(Complex z) {
  const double d = 1.0 - std::norm(z);
  return 4.0 / (d * d);
}

void detail::finalize_mesh(SurfaceMesh& m, bool uniformizeMetric) {
  const int nf = static_cast<int>(m.faces.size());
  m.quadrature = ScalarField(nf);
  for (int f = 0; f < nf; ++f) {
    const auto z = m.corners(f);
    const double area = 0.5 * std::imag(std::conj(z[1] - z[0]) * (z[2] - z[0]));
    if (!(area > 0.0)) throw Error(ErrorCode::InvalidMesh, "face is not positively oriented");
    m.quadrature[f] = area;
  }
  build_quotient(m);
  build_neighbourhoods(m);
  build_edge_stencils(m);
  m.homologyLoops = homology_basis(m);
  TensorField kappa(nf, true);
  for (int f = 0; f < nf; ++f) {
    const auto z = m.corners(f);
    kappa[f] = (geodesic_triangle_area(z[0], z[1], z[2]) / m.quadrature[f]) * Eigen::Matrix2d::Identity();
  }
  TensorField sampled(nf, true);
  for (int f = 0; f < nf; ++f)
    sampled[f] = poincare_factor(to_complex(m.centroid(f))) * Eigen::Matrix2d::Identity();
  // Levels 0 and 1 are too coarse to carry a curvature -1 metric of this form; they keep the exact face areas.
  // Finer levels start from centroid samples, which are smooth across faces, and are corrected to K = -1.
  m.backgroundMetric = (uniformizeMetric && m.level >= 2) ? uniformize(m, sampled) : kappa;
}

SurfaceMesh detail::build_domain(int refinementLevel, bool uniformizeMetric) {
  if (refinementLevel < 0 || refinementLevel > kMaxRefinementLevel)
    throw Error(ErrorCode::CapExceeded, "refinement level must lie in [0, " + std::to_string(kMaxRefinementLevel) + "]");
  SurfaceMesh m;
  const double r = corner_radius();
  m.vertices.push_back(Eigen::Vector2d::Zero());
  for (int j = 0; j < 8; ++j) {
    const double angle = (2 * j - 1) * kPi / 8.0;
    m.vertices.emplace_back(r * std::cos(angle), r * std::sin(angle));
  }
  for (int j = 0; j < 8; ++j) m.faces.push_back({0, 1 + j, 1 + (j + 1) % 8});
  const double d = inradius();
  for (int j = 0; j < 8; ++j)
    m.sidePairings.push_back({j, (j + 4) % 8, Mobius::translation(2.0 * d, j * kPi / 4.0 + kPi)});

  for (int l = 0; l < refinementLevel; ++l) subdivide(m);
  m.level = refinementLevel;
  detail::finalize_mesh(m, uniformizeMetric);
  return m;
}

SurfaceMesh build_bolza(int refinementLevel) { return detail::build_domain(refinementLevel, true); }

SurfaceMesh refine(const SurfaceMesh& mesh) {
  if (mesh.level >= kMaxRefinementLevel)
    throw Error(ErrorCode::CapExceeded, "refinement cap reached");
  SurfaceMesh m;
  m.genus = mesh.genus;
  m.vertices = mesh.vertices;
  m.faces = mesh.faces;
  m.sidePairings = mesh.sidePairings;
  subdivide(m);
  m.level = mesh.level + 1;
  detail::finalize_mesh(m, true);
  return m;
}

double integrate(const ScalarField& f, const TensorField& areaMetric, const SurfaceMesh& mesh) {
  const std::size_t nf = mesh.face_count();
  if (f.size() != nf || areaMetric.size() != nf)
    throw Error(ErrorCode::MismatchedMesh, "field size does not match face count");
  double sum = 0.0;
  for (std::size_t i = 0; i < nf; ++i) {
    const Eigen::Matrix2d& g = areaMetric[i];
    const double det = g.determinant();
    if (!(det > 0.0 && g(0, 0) > 0.0))
      throw Error(ErrorCode::NotPositiveDefinite, "area metric not positive definite on face " + std::to_string(i));
    sum += f[i] * std::sqrt(det) * mesh.quadrature[i];
  }
  return sum;
}

namespace {

struct TreeCotree {
  std::vector<int> parentVertex, parentEdge;  // primal BFS tree
  std::vector<char> inTree, inCotree;
  std::vector<int> faceOrder;       // dual BFS order, root first
  std::vector<int> faceParentEdge;  // edge crossed to reach each face
  std::vector<int> generators;
};

TreeCotree tree_cotree(const SurfaceMesh& m) {
  const int nv = m.quotientVertexCount;
  const int ne = static_cast<int>(m.edges.size());
  const int nf = static_cast<int>(m.faces.size());
  TreeCotree t;
  t.parentVertex.assign(nv, -1);
  t.parentEdge.assign(nv, -1);
  t.inTree.assign(ne, 0);
  t.inCotree.assign(ne, 0);

  std::vector<std::vector<int>> incident(nv);
  for (int e = 0; e < ne; ++e) {
    incident[m.edges[e].v0].push_back(e);
    if (m.edges[e].v1 != m.edges[e].v0) incident[m.edges[e].v1].push_back(e);
  }
  std::vector<char> reached(nv, 0);
  std::deque<int> queue{0};
  reached[0] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int e : incident[v]) {
      const int w = m.edges[e].v0 == v ? m.edges[e].v1 : m.edges[e].v0;
      if (reached[w]) continue;
      reached[w] = 1;
      t.parentVertex[w] = v;
      t.parentEdge[w] = e;
      t.inTree[e] = 1;
      queue.push_back(w);
    }
  }

  t.faceParentEdge.assign(nf, -1);
  std::vector<char> seen(nf, 0);
  seen[0] = 1;
  t.faceOrder.push_back(0);
  for (std::size_t head = 0; head < t.faceOrder.size(); ++head) {
    const int f = t.faceOrder[head];
    for (int j = 0; j < 3; ++j) {
      const int e = m.faceEdges[f][j];
      if (t.inTree[e]) continue;
      const QuotientEdge& qe = m.edges[e];
      const int g = qe.sides[0].face == f && qe.sides[0].local == j ? qe.sides[1].face : qe.sides[0].face;
      if (seen[g]) continue;
      seen[g] = 1;
      t.inCotree[e] = 1;
      t.faceParentEdge[g] = e;
      t.faceOrder.push_back(g);
    }
  }
  for (int e = 0; e < ne; ++e)
    if (!t.inTree[e] && !t.inCotree[e]) t.generators.push_back(e);
  if (static_cast<int>(t.generators.size()) != 2 * m.genus)
    throw Error(ErrorCode::InvalidMesh, "tree-cotree left " + std::to_string(t.generators.size()) + " generators");
  return t;
}

std::vector<int> path_to_root(const TreeCotree& t, int v, std::vector<int>& verts) {
  std::vector<int> edges;
  verts.assign(1, v);
  while (t.parentVertex[v] >= 0) {
    edges.push_back(t.parentEdge[v]);
    v = t.parentVertex[v];
    verts.push_back(v);
  }
  return edges;
}

/// Edge orientations along a loop, walking from the start of its first edge.
std::vector<int> loop_signs(const SurfaceMesh& m, const EdgeLoop& loop, bool& closed) {
  std::vector<int> signs;
  closed = false;
  if (loop.empty()) return signs;
  const int start = m.edges[loop[0]].v0;
  int cur = start;
  for (int e : loop) {
    const QuotientEdge& qe = m.edges[e];
    if (qe.v0 == cur) {
      signs.push_back(1);
      cur = qe.v1;
    } else if (qe.v1 == cur) {
      signs.push_back(-1);
      cur = qe.v0;
    } else {
      return signs;
    }
  }
  closed = (cur == start);
  return signs;
}

}  // namespace

std::vector<EdgeLoop> homology_basis(const SurfaceMesh& mesh) {
  const TreeCotree t = tree_cotree(mesh);
  std::vector<EdgeLoop> loops;
  for (int g : t.generators) {
    const QuotientEdge& qe = mesh.edges[g];
    std::vector<int> va, vb;
    std::vector<int> ea = path_to_root(t, qe.v1, va);  // from the end of the generator
    std::vector<int> eb = path_to_root(t, qe.v0, vb);  // back to its start
    // Strip the common part above the lowest common ancestor.
    while (va.size() > 1 && vb.size() > 1 && va[va.size() - 2] == vb[vb.size() - 2]) {
      va.pop_back();
      vb.pop_back();
      ea.pop_back();
      eb.pop_back();
    }
    EdgeLoop loop{g};
    loop.insert(loop.end(), ea.begin(), ea.end());
    loop.insert(loop.end(), eb.rbegin(), eb.rend());
    loops.push_back(std::move(loop));
  }
  return loops;
}

bool loop_is_closed(const SurfaceMesh& mesh, const EdgeLoop& loop) {
  bool closed = false;
  loop_signs(mesh, loop, closed);
  return closed;
}

std::vector<Eigen::VectorXd> dual_cocycles(const SurfaceMesh& mesh) {
  const TreeCotree t = tree_cotree(mesh);
  const int ne = static_cast<int>(mesh.edges.size());
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < t.generators.size(); ++i) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(ne);
    c[t.generators[i]] = 1.0;
    for (std::size_t k = t.faceOrder.size(); k-- > 1;) {
      const int f = t.faceOrder[k];
      const int pe = t.faceParentEdge[f];
      double sum = 0.0;
      int parentSign = 0;
      for (int j = 0; j < 3; ++j) {
        if (mesh.faceEdges[f][j] == pe) {
          parentSign = mesh.faceEdgeSigns[f][j];
        } else {
          sum += mesh.faceEdgeSigns[f][j] * c[mesh.faceEdges[f][j]];
        }
      }
      c[pe] = -sum / parentSign;
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace detail {

/// Constant 1-form on a face reproducing closed edge values (chart coordinates).
Eigen::Vector2d face_form(const SurfaceMesh& mesh, int f, const Eigen::VectorXd& cochain) {
  const auto& vs = mesh.faces[f];
  const Eigen::Vector2d p0 = mesh.vertices[vs[0]], p1 = mesh.vertices[vs[1]], p2 = mesh.vertices[vs[2]];
  const double v2 = mesh.faceEdgeSigns[f][2] * cochain[mesh.faceEdges[f][2]];  // p0 -> p1
  const double v0 = mesh.faceEdgeSigns[f][0] * cochain[mesh.faceEdges[f][0]];  // p1 -> p2
  Eigen::Matrix2d A;
  A.row(0) = (p1 - p0).transpose();
  A.row(1) = (p2 - p1).transpose();
  return A.partialPivLu().solve(Eigen::Vector2d(v2, v0));
}

}  // namespace detail

Eigen::Matrix4d intersection_matrix(const SurfaceMesh& mesh) {
  const auto cocycles = dual_cocycles(mesh);
  const int nf = static_cast<int>(mesh.face_count());
  Eigen::Matrix4d cup = Eigen::Matrix4d::Zero();
  for (int f = 0; f < nf; ++f) {
    std::array<Eigen::Vector2d, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = detail::face_form(mesh, f, cocycles[i]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        cup(i, j) += (v[i].x() * v[j].y() - v[i].y() * v[j].x()) * mesh.quadrature[f];
  }
  return cup.inverse();
}

double corner_angle_sum(const SurfaceMesh& mesh) {
  double sum = 0.0;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto z = mesh.corners(static_cast<int>(f));
    for (int i = 0; i < 3; ++i) {
      const int v = mesh.faces[f][i];
      if (v < 1 || v > 8) continue;
      sum += geodesic_triangle_angle(z[i], z[(i + 1) % 3], z[(i + 2) % 3]);
    }
  }
  return sum;
}

double sampled_poincare_area(const SurfaceMesh& mesh) {
  double sum = 0.0;
  for (std::size_t f = 0; f < mesh.face_count(); ++f)
    sum += poincare_factor(to_complex(mesh.centroid(static_cast<int>(f)))) * mesh.quadrature[f];
  return sum;
}

}  // namespace cgc
