#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace cgc {

using Complex = std::complex<double>;

/// Per-face symmetric 2-tensor in the face's disk-model chart.
struct TensorField {
  std::vector<Eigen::Matrix2d> values;
  bool metricCandidate = false;

  TensorField() = default;
  explicit TensorField(std::size_t n, bool metric = false)
      : values(n, Eigen::Matrix2d::Zero()), metricCandidate(metric) {}

  std::size_t size() const { return values.size(); }
  Eigen::Matrix2d& operator[](std::size_t f) { return values[f]; }
  const Eigen::Matrix2d& operator[](std::size_t f) const { return values[f]; }
};

/// Per-face (1,1)-tensor: maps tangent vectors to tangent vectors.
struct OperatorField {
  std::vector<Eigen::Matrix2d> values;

  OperatorField() = default;
  explicit OperatorField(std::size_t n) : values(n, Eigen::Matrix2d::Zero()) {}

  std::size_t size() const { return values.size(); }
  Eigen::Matrix2d& operator[](std::size_t f) { return values[f]; }
  const Eigen::Matrix2d& operator[](std::size_t f) const { return values[f]; }
};

struct ScalarField {
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(std::size_t n, double v = 0.0) : values(n, v) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t f) { return values[f]; }
  double operator[](std::size_t f) const { return values[f]; }
};

/// q = phi dz^2 with phi stored per face in the face's disk coordinate.
struct QuadraticDifferential {
  std::vector<Complex> phi;

  QuadraticDifferential() = default;
  explicit QuadraticDifferential(std::size_t n) : phi(n, Complex(0.0, 0.0)) {}

  std::size_t size() const { return phi.size(); }
  Complex& operator[](std::size_t f) { return phi[f]; }
  Complex operator[](std::size_t f) const { return phi[f]; }
};

/// Beltrami coefficient nu (complex-antilinear part of a (1,1)-tensor) per face.
struct BeltramiField {
  std::vector<Complex> nu;

  BeltramiField() = default;
  explicit BeltramiField(std::size_t n) : nu(n, Complex(0.0, 0.0)) {}

  std::size_t size() const { return nu.size(); }
  Complex& operator[](std::size_t f) { return nu[f]; }
  Complex operator[](std::size_t f) const { return nu[f]; }
};

// Pointwise arithmetic used all over the volume and variation code.
TensorField operator+(const TensorField& a, const TensorField& b);
TensorField operator-(const TensorField& a, const TensorField& b);
TensorField operator*(double s, const TensorField& a);
QuadraticDifferential operator+(const QuadraticDifferential& a, const QuadraticDifferential& b);
QuadraticDifferential operator*(Complex s, const QuadraticDifferential& a);
QuadraticDifferential operator*(double s, const QuadraticDifferential& a);

/// Re(phi dz^2) as a real symmetric tensor in chart coordinates.
Eigen::Matrix2d real_part_tensor(Complex phi);
/// 2 Re q as a TensorField.
TensorField two_real_part(const QuadraticDifferential& q);

}  // namespace cgc
