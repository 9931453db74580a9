#include "qsl/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qsl {

std::pair<RVector, Matrix> hermitian_eig(const Matrix& m) {
  require_square(m, "hermitian_eig");
  if (!is_hermitian(m))
    throw std::invalid_argument("hermitian_eig: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: solver failed");
  const int n = static_cast<int>(m.rows());
  RVector vals(n);
  Matrix vecs(n, n);
  for (int k = 0; k < n; ++k) {  // Eigen returns ascending; flip.
    vals[k] = solver.eigenvalues()[n - 1 - k];
    vecs.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return {std::move(vals), std::move(vecs)};
}

RVector singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

Matrix sqrt_psd(const Matrix& m) {
  auto [vals, vecs] = hermitian_eig(m);
  for (int k = 0; k < vals.size(); ++k) {
    if (vals[k] < kPsdEigenvalueFloor)
      throw std::invalid_argument("sqrt_psd: matrix not PSD");
    vals[k] = std::sqrt(std::max(0.0, vals[k]));
  }
  return vecs * vals.asDiagonal() * vecs.adjoint();
}

namespace {

void check_state(const Matrix& rho, const char* what) {
  require_square(rho, what);
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho.trace().imag()) > 1e-8)
    throw std::invalid_argument(std::string(what) + ": trace != 1");
}

}  // namespace

double bures_angle(const Matrix& rho0, const Matrix& rho1) {
  check_state(rho0, "bures_angle");
  check_state(rho1, "bures_angle");
  require_same_dim(rho0, rho1, "bures_angle");
  double fidelity_root;  // Tr√(√ρ₀ ρ₁ √ρ₀)
  if (std::abs((rho0 * rho0 - rho0).cwiseAbs().maxCoeff()) < 1e-9) {
    // Pure ρ₀ = |ψ⟩⟨ψ|: the root fidelity collapses to √⟨ψ|ρ₁|ψ⟩.
    fidelity_root = std::sqrt(std::max(0.0, (rho0 * rho1).trace().real()));
  } else {
    const Matrix root0 = sqrt_psd(rho0);
    fidelity_root = sqrt_psd(root0 * rho1 * root0).trace().real();
  }
  return std::acos(std::clamp(fidelity_root, 0.0, 1.0));
}

double energy_stddev(const Matrix& rho, const Matrix& h) {
  check_state(rho, "energy_stddev");
  require_same_dim(rho, h, "energy_stddev");
  if (!is_hermitian(h))
    throw std::invalid_argument("energy_stddev: H not Hermitian");
  const double e1 = (rho * h).trace().real();
  const double e2 = (rho * h * h).trace().real();
  return std::sqrt(std::max(0.0, e2 - e1 * e1));
}

double operator_norm(const Matrix& m) {
  const RVector s = singular_values(m);
  return s.size() ? s[0] : 0.0;
}

double trace_norm(const Matrix& m) { return singular_values(m).sum(); }

double frobenius_norm(const Matrix& m) { return m.norm(); }

}  // namespace qsl
