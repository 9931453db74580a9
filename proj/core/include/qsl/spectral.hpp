#pragma once

#include <utility>

#include "qsl/types.hpp"

namespace qsl {

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
std::pair<RVector, Matrix> hermitian_eig(const Matrix& m);

/// Singular values, descending.
RVector singular_values(const Matrix& m);

/// Principal square root of a PSD matrix; eigenvalues in [−1e−8, 0) are
/// clamped to 0, anything lower throws.
Matrix sqrt_psd(const Matrix& m);

/// Θ = arccos Tr√(√ρ₀ ρ₁ √ρ₀); takes the arccos√⟨ψ|ρ₁|ψ⟩ shortcut when ρ₀
/// is pure.
double bures_angle(const Matrix& rho0, const Matrix& rho1);

/// √(Tr(ρH²) − Tr(ρH)²), clamped at 0.
double energy_stddev(const Matrix& rho, const Matrix& h);

double operator_norm(const Matrix& m);
double trace_norm(const Matrix& m);
double frobenius_norm(const Matrix& m);

}  // namespace qsl
