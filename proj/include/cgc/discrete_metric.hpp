#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "cgc/fields.hpp"
#include "cgc/mesh.hpp"

namespace cgc {

/// Angle-defect curvature of the piecewise-flat metric whose squared edge lengths are
/// the averages of E^T g E over the two faces of each quotient edge.
struct DiscreteCurvature {
  std::vector<double> vertexCurvature;
  std::vector<double> vertexArea;
  std::vector<double> angleSum;
  ScalarField faceCurvature;
};

/// Squared quotient-edge lengths induced by g (mean of the two sides' estimates).
std::vector<double> edge_lengths_squared(const SurfaceMesh& mesh, const TensorField& g);

DiscreteCurvature discrete_curvature(const SurfaceMesh& mesh, const TensorField& g);

/// Metric family g(e) = fixed + e_f * conformal with one factor per face.
struct ConformalFamily {
  const SurfaceMesh* mesh = nullptr;
  TensorField fixed;
  TensorField conformal;

  TensorField metric(const ScalarField& factor) const;
  /// Vertex curvature minus target.
  Eigen::VectorXd residual(const ScalarField& factor, double target) const;
  /// d K_v / d e_f (vertex rows, face columns).
  Eigen::SparseMatrix<double> jacobian(const ScalarField& factor) const;
};

struct ConformalSolveOptions {
  double tolerance = 1e-12;
  int maxIterations = 50;
  /// Lower bound on the eigenvalues of conformal^{-1} g accepted during line search.
  double admissibilityMargin = 1e-6;
};

struct ConformalSolveResult {
  ScalarField factor;
  TensorField metric;
  int iterations = 0;
  double residual = 0.0;  // area-weighted L2 norm of K - target
};

/// Among face factors with vertex curvature equal to `target`, finds the one of least
/// dual-graph Dirichlet energy (Gauss-Newton SQP steps). Throws NonConvergence or PositivityLoss.
ConformalSolveResult solve_constant_curvature(const ConformalFamily& family, ScalarField initial, double target,
                                              const ConformalSolveOptions& options = {});

/// True when every face of fixed + e * conformal has conformal-relative eigenvalues above margin.
bool admissible(const ConformalFamily& family, const ScalarField& factor, double margin);

/// Area-weighted L2 norm of K - target for a metric.
double curvature_residual(const SurfaceMesh& mesh, const TensorField& g, double target);

}  // namespace cgc

namespace cgc {

/// Rescales an initial conformal metric face-wise so that its discrete curvature is -1 at every vertex.
TensorField uniformize(const SurfaceMesh& mesh, const TensorField& initial);

}  // namespace cgc
