#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cgc/fields.hpp"
#include "cgc/mesh.hpp"

namespace cgc {

/// Least-squares fit over a face neighbourhood, done in the disk chart centred at the face
/// centroid; gradients are converted back to the face chart.
struct FaceStencil {
  std::vector<int> faces;          // root face first
  std::vector<Mobius> transitions; // root chart -> neighbour chart
  std::vector<Complex> points;     // neighbour centroids in the root chart
  Eigen::MatrixXd weights;         // 2 x n: d/du, d/dv at the origin of the centred chart
  Mobius centring;                 // root chart -> centred chart
  std::vector<Eigen::Matrix2d> pulls;  // Jacobians of centred chart -> neighbour chart at the samples
  std::vector<Complex> pullDerivatives;
  double stretch = 1.0;            // |centring'| at the centroid
  Complex bend;                    // centring'' at the centroid
};

std::vector<FaceStencil> build_stencils(const SurfaceMesh& mesh);

/// Neighbour data pulled back to the root chart.
Eigen::Matrix2d pull_tensor(const FaceStencil& s, std::size_t i, const Eigen::Matrix2d& t);
Eigen::Matrix2d pull_operator(const FaceStencil& s, std::size_t i, const Eigen::Matrix2d& b);
Complex pull_quadratic(const FaceStencil& s, std::size_t i, Complex phi);

/// d/dx and d/dy at the root centroid (root chart) of a field.
std::array<Eigen::Matrix2d, 2> tensor_gradient(const FaceStencil& s, const TensorField& t);
std::array<Eigen::Matrix2d, 2> operator_gradient(const FaceStencil& s, const OperatorField& b);
Eigen::Vector2d scalar_gradient(const FaceStencil& s, const ScalarField& f);
std::array<Complex, 2> quadratic_gradient(const FaceStencil& s, const QuadraticDifferential& q);

/// Christoffel symbols gamma[a](b, c) of a metric from its value and coordinate derivatives.
std::array<Eigen::Matrix2d, 2> christoffel(const Eigen::Matrix2d& g, const std::array<Eigen::Matrix2d, 2>& dg);

OperatorField shape_operator(const TensorField& I, const TensorField& II);
ScalarField tensor_inner(const TensorField& a, const TensorField& b, const TensorField& g);
TensorField traceless_part(const TensorField& t, const TensorField& g);
/// T(B., .) as a symmetric tensor (the lowered operator).
TensorField lower(const TensorField& g, const OperatorField& b);
/// g(B., B.)
TensorField lower_twice(const TensorField& g, const OperatorField& b);

ScalarField gaussian_curvature(const TensorField& g, const SurfaceMesh& mesh);

/// Pointwise norm of the Codazzi defect at every face.
ScalarField codazzi_defect(const TensorField& g, const OperatorField& b, const SurfaceMesh& mesh);
double codazzi_residual(const TensorField& g, const OperatorField& b, const SurfaceMesh& mesh);
double divergence_identity_residual(const TensorField& I, const TensorField& II, const SurfaceMesh& mesh);

/// L2 norm of a scalar field with respect to the area of g.
double l2_norm(const ScalarField& f, const TensorField& g, const SurfaceMesh& mesh);
/// Pointwise g-norm sqrt(<T, T>_g) of a symmetric tensor field.
ScalarField tensor_norm(const TensorField& t, const TensorField& g);

void require_metric(const TensorField& g, const char* what);

void write_tensor_csv(std::ostream& out, const TensorField& t);
void write_tensor_csv(const std::string& path, const TensorField& t);

}  // namespace cgc
