#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace qsl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kPsdEigenvalueFloor = -1e-8;
inline constexpr double kTieRelTol = 1e-10;

inline Matrix dagger(const Matrix& m) { return m.adjoint(); }

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

/// Max-modulus deviation from Hermiticity, relative to the largest entry.
inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, scale);
}

inline bool is_unitary(const Matrix& u, double tol = kUnitaryTol) {
  if (u.rows() != u.cols()) return false;
  const Matrix g = u.adjoint() * u;
  return (g - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix spin1_x() {
  Matrix m(3, 3);
  const double s = 1.0 / std::sqrt(2.0);
  m << 0, s, 0, s, 0, s, 0, s, 0;
  return m;
}

inline Matrix spin1_y() {
  Matrix m(3, 3);
  const Complex i(0, 1);
  const double s = 1.0 / std::sqrt(2.0);
  m << 0, -i * s, 0, i * s, 0, -i * s, 0, i * s, 0;
  return m;
}

inline Matrix spin1_z() {
  Matrix m(3, 3);
  m << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  return m;
}

}  // namespace qsl
