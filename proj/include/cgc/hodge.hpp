#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cgc/fields.hpp"
#include "cgc/mesh.hpp"

namespace cgc {

/// Integrated 1-form: one value per quotient edge, along the edge orientation.
struct OneFormField {
  std::vector<double> values;
};

/// Constant covector (a, b) ~ a dx + b dy per face in the face chart.
struct FaceForm {
  std::vector<Eigen::Vector2d> values;
};

std::vector<OneFormField> harmonic_one_forms(const SurfaceMesh& mesh);

/// Sum of a form around the boundary of each face.
std::vector<double> face_boundary_sums(const SurfaceMesh& mesh, const OneFormField& form);
/// Integral of a form along each homology loop.
Eigen::MatrixXd period_matrix(const SurfaceMesh& mesh, const std::vector<OneFormField>& forms);

FaceForm face_form(const SurfaceMesh& mesh, const OneFormField& form);
/// Conformal Hodge star on face covectors: (a, b) -> (-b, a).
FaceForm star(const FaceForm& form);

struct QdBasis {
  std::array<QuadraticDifferential, 3> elements;
  Eigen::Vector3d gramEigenvalues;  // of the products before orthonormalization, descending
  double gramCondition = 0.0;
  Eigen::Vector2d oneFormGramEigenvalues;  // two leading eigenvalues of the holomorphic 1-form Gram matrix
};

QdBasis holomorphic_qd_basis(const SurfaceMesh& mesh);

/// Hermitian L2(sigma) pairing of two quadratic differentials.
Complex qd_inner(const QuadraticDifferential& a, const QuadraticDifferential& b, const SurfaceMesh& mesh);

double holomorphy_residual(const QuadraticDifferential& q, const SurfaceMesh& mesh);

/// Largest mismatch of phi across side-paired edges after the dz^2 transformation, relative to the
/// largest mismatch across interior edges (both from face to adjacent face).
double equivariance_ratio(const QuadraticDifferential& q, const SurfaceMesh& mesh);

QuadraticDifferential conjugate(const QuadraticDifferential& q);

void write_basis_csv(std::ostream& out, const QuadraticDifferential& q);
void write_basis_csv(const std::string& path, const QuadraticDifferential& q);

}  // namespace cgc
