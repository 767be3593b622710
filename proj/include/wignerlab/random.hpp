#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace wignerlab {

using Rng = std::mt19937_64;

/// Mixes a base seed with a stream index (splitmix64 finalizer) so that every
/// trial of every sampled check owns an independent, replayable generator.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Complex standard Gaussian entries, E|z|^2 = 1.
inline Eigen::MatrixXcd gaussian_complex(Eigen::Index rows, Eigen::Index cols,
                                         Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = std::complex<double>(scale * re, scale * im);
    }
  return m;
}

inline Eigen::MatrixXd gaussian_real(Eigen::Index rows, Eigen::Index cols,
                                     Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// Orthonormal columns spanning the same space as `a`, with the phase of each
/// column fixed by the diagonal of R. Applied to a Gaussian matrix this gives
/// a Haar-distributed frame.
inline Eigen::MatrixXcd orthonormalize_columns(const Eigen::MatrixXcd& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

inline Eigen::MatrixXcd haar_unitary(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return orthonormalize_columns(gaussian_complex(n, n, rng));
}

}  // namespace wignerlab
