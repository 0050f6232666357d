#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cgc/fields.hpp"
#include "cgc/mobius.hpp"

namespace cgc {

/// Highest refinement level accepted by build_bolza.
inline constexpr int kMaxRefinementLevel = 7;

struct SidePairing {
  int side = 0;
  int partner = 0;
  /// Carries side `side` onto side `partner` (and the domain onto its neighbour across `partner`).
  Mobius map;
};

/// One face-side of a quotient edge. `local` is the face edge opposite vertex `local`,
/// running from corner local+1 to corner local+2.
struct EdgeIncidence {
  int face = -1;
  int local = -1;
  int sign = 1;
};

struct QuotientEdge {
  int v0 = -1;
  int v1 = -1;
  std::array<EdgeIncidence, 2> sides{};
  /// Chart change from sides[0].face to sides[1].face (identity for interior edges).
  Mobius transition;
};

/// A face sharing at least one vertex with a root face, with the chart change root -> face.
struct NeighbourFace {
  int face = -1;
  Mobius transition;
};

using EdgeLoop = std::vector<int>;

/// Linear reconstruction of a face-wise tensor along one side of an edge, in that side's chart:
/// metric at the start, midpoint and end, and its x/y derivatives at the midpoint.
struct EdgeStencil {
  Eigen::Vector2d edge = Eigen::Vector2d::Zero();  // chart vector from start to end
  std::vector<int> faces;
  std::vector<Eigen::Matrix2d> pulls;  // chart Jacobians; the neighbour tensor enters as P^T g P
  Eigen::Matrix<double, 5, Eigen::Dynamic> weights;
};

struct SurfaceMesh {
  int level = 0;
  int genus = 2;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<SidePairing> sidePairings;
  TensorField backgroundMetric;
  ScalarField quadrature;  // Euclidean coordinate area of each face
  std::vector<EdgeLoop> homologyLoops;

  // Quotient complex.
  int quotientVertexCount = 0;
  std::vector<int> quotientVertex;  // domain vertex -> quotient vertex
  std::vector<std::array<int, 3>> faceVertices;  // quotient vertex per corner
  std::vector<QuotientEdge> edges;
  std::vector<std::array<int, 3>> faceEdges;  // quotient edge per local edge
  std::vector<std::array<int, 3>> faceEdgeSigns;
  std::vector<std::vector<NeighbourFace>> neighbourhoods;  // includes the face itself first
  std::vector<std::array<EdgeStencil, 2>> edgeStencils;

  std::size_t face_count() const { return faces.size(); }
  int euler_characteristic() const;
  Eigen::Vector2d centroid(int face) const;
  /// Corner positions of `face` in its own chart.
  std::array<Complex, 3> corners(int face) const;
};

SurfaceMesh build_bolza(int refinementLevel);
SurfaceMesh refine(const SurfaceMesh& mesh);

double integrate(const ScalarField& f, const TensorField& areaMetric, const SurfaceMesh& mesh);

std::vector<EdgeLoop> homology_basis(const SurfaceMesh& mesh);

/// Algebraic intersection numbers of the homology loops, via the cup product of their dual cocycles.
Eigen::Matrix4d intersection_matrix(const SurfaceMesh& mesh);

/// Edge cochains dual to the homology loops (cocycle i has period delta_ij on loop j).
std::vector<Eigen::VectorXd> dual_cocycles(const SurfaceMesh& mesh);

/// Sum of the interior angles of the 8 octagon corners (2 pi for a smooth quotient point).
double corner_angle_sum(const SurfaceMesh& mesh);

/// Area of the mesh under the Poincare metric sampled at face centroids (quadrature study).
double sampled_poincare_area(const SurfaceMesh& mesh);

/// Checks loop closure: each loop is a cycle in the quotient graph.
bool loop_is_closed(const SurfaceMesh& mesh, const EdgeLoop& loop);

void write_mesh(std::ostream& out, const SurfaceMesh& mesh);
void write_mesh(const std::string& path, const SurfaceMesh& mesh);
SurfaceMesh read_mesh(std::istream& in);
SurfaceMesh read_mesh(const std::string& path);

namespace detail {
/// Recomputes quadrature, quotient complex, neighbourhoods, loops and background metric.
void finalize_mesh(SurfaceMesh& m, bool uniformizeMetric);
SurfaceMesh build_domain(int refinementLevel, bool uniformizeMetric);
/// Constant covector on a face reproducing closed edge values.
Eigen::Vector2d face_form(const SurfaceMesh& mesh, int face, const Eigen::VectorXd& cochain);
}  // namespace detail

/// Pointwise Poincare metric factor 4/(1-|z|^2)^2.
double poincare_factor(Complex z);

}  // namespace cgc
