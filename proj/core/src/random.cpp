#include "qsl/random.hpp"

#include <cmath>

#include <Eigen/QR>

#include "qsl/spectral.hpp"

namespace qsl {

namespace {

Matrix gaussian_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

Matrix haar_unitary(int n, std::mt19937_64& rng) {
  const Matrix g = gaussian_matrix(n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= (a > 0) ? d / a : Complex(1, 0);
  }
  return q;
}

Matrix haar_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_unitary(n, rng);
}

Matrix random_antihermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix k = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = Complex(0.0, gauss(rng));
    for (int j = i + 1; j < n; ++j) {
      const Complex z(gauss(rng), gauss(rng));
      k(i, j) = z;
      k(j, i) = -std::conj(z);
    }
  }
  const double norm = k.norm();
  if (norm > 0) k /= norm;
  return k;
}

Matrix unitary_exp(const Matrix& k, double eps) {
  // K anti-Hermitian ⇒ H = −iK Hermitian and exp(εK) = exp(iεH).
  const Matrix h = Complex(0, -1) * k;
  auto [vals, vecs] = hermitian_eig(h);
  CVector phases(vals.size());
  for (int j = 0; j < vals.size(); ++j)
    phases[j] = std::exp(Complex(0, eps * vals[j]));
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

}  // namespace qsl
