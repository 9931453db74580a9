#pragma once

#include <cstdint>
#include <random>

#include "qsl/types.hpp"

namespace qsl {

/// Haar-distributed unitary: QR of a complex standard-Gaussian matrix with
/// the R-diagonal phase correction.
Matrix haar_unitary(int n, std::mt19937_64& rng);
Matrix haar_unitary(int n, std::uint64_t seed);

/// Anti-Hermitian direction with unit Frobenius norm: complex Gaussians on
/// the strictly upper triangle, imaginary Gaussians on the diagonal.
Matrix random_antihermitian(int n, std::mt19937_64& rng);

/// exp(εK) for anti-Hermitian K, via the eigendecomposition of H = −iK.
Matrix unitary_exp(const Matrix& k, double eps);

}  // namespace qsl
