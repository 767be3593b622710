#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wignerlab/errors.hpp"
#include "wignerlab/operator_space.hpp"
#include "wignerlab/random.hpp"
#include "wignerlab/superop.hpp"

namespace wignerlab {

inline constexpr double kUnitarityTolerance = 1e-9;

inline double unitarity_deviation(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u -
          Eigen::MatrixXcd::Identity(u.cols(), u.cols()))
      .norm();
}

inline void require_unitary(const Eigen::MatrixXcd& u, const char* who) {
  if (u.rows() != u.cols())
    throw DimensionMismatch(std::string(who) + ": matrix must be square");
  detail::require_dimension(u.rows());
  const double dev = unitarity_deviation(u);
  if (!(dev <= kUnitarityTolerance))
    throw NotUnitary(std::string(who) + ": matrix is not unitary (||U^dagger U"
                     " - I|| = " + std::to_string(dev) + ")",
                     dev);
}

/// X -> Xᵗ, transposition in the standard basis. Diagonal in the Hermitian
/// basis: +1 on identity, diagonal and symmetric elements, -1 on the
/// antisymmetric ones.
inline Superoperator transpose_map(Index n) {
  detail::require_dimension(n);
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n * n);
  const Index off = n * (n - 1) / 2;
  d.tail(off).setConstant(-1.0);
  return Superoperator(n, d.asDiagonal().toDenseMatrix());
}

/// X -> M X M^dagger for an arbitrary square M. Positive, generally not
/// trace preserving.
inline Superoperator congruence_map(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("congruence_map: matrix must be square");
  return Superoperator::from_function(m.rows(), [&](const HermitianMatrix& x) {
    return HermitianMatrix(m * x.matrix() * m.adjoint());
  });
}

/// X -> U X U^dagger, or X -> U Xᵗ U^dagger when `transpose` is set.
inline Superoperator wigner_map(const Eigen::MatrixXcd& u, bool transpose) {
  require_unitary(u, "wigner_map");
  return Superoperator::from_function(u.rows(), [&](const HermitianMatrix& x) {
    const Eigen::MatrixXcd xin =
        transpose ? Eigen::MatrixXcd(x.matrix().transpose()) : x.matrix();
    const Eigen::MatrixXcd y = u * xin * u.adjoint();
    return HermitianMatrix(0.5 * (y + y.adjoint()));
  });
}

/// X -> (1/k) I Tr X - X.
///
/// Only the identity coordinate sees the trace term: <I/sqrt(n), I Tr X>/k =
/// (n/k) x_0, so the matrix is diag(n/k - 1, -1, ..., -1) exactly.
inline Superoperator reduction_map(Index n, Index k) {
  detail::require_dimension(n);
  if (k < 1 || k > n - 1)
    throw InvalidRank("reduction_map: need 1 <= k <= n-1 (n=" +
                      std::to_string(n) + ", k=" + std::to_string(k) + ")");
  Eigen::MatrixXd m = -Eigen::MatrixXd::Identity(n * n, n * n);
  m(0, 0) = static_cast<double>(n) / static_cast<double>(k) - 1.0;
  return Superoperator(n, std::move(m));
}

/// The reduction map on dimension 2k, which is its own inverse.
inline Superoperator involution_map(Index k) {
  if (k < 1) throw InvalidRank("involution_map: k must be >= 1");
  return reduction_map(2 * k, k);
}

/// [[0, I], [-I, 0]] on C^{2 n_half}: antisymmetric and unitary.
inline Eigen::MatrixXcd symplectic_unitary(Index n_half) {
  if (n_half < 1) throw InvalidDimension("symplectic_unitary: n_half >= 1");
  const Index d = 2 * n_half;
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d, d);
  j.topRightCorner(n_half, n_half).setIdentity();
  j.bottomLeftCorner(n_half, n_half) =
      -Eigen::MatrixXcd::Identity(n_half, n_half);
  return j;
}

/// V J Vᵗ for Haar V: a random antisymmetric unitary.
inline Eigen::MatrixXcd random_antisymmetric_unitary(Index n_half,
                                                     std::uint64_t seed) {
  const Eigen::MatrixXcd v = haar_unitary(2 * n_half, seed);
  return v * symplectic_unitary(n_half) * v.transpose();
}

/// (I Tr X - X - U Xᵗ U^dagger) / (2(n_half - 1)) on dimension 2 n_half.
/// Requires U antisymmetric and unitary.
inline Superoperator breuer_hall_map(Index n_half, const Eigen::MatrixXcd& u) {
  if (n_half < 2)
    throw InvalidDimension("breuer_hall_map: n_half must be >= 2");
  const Index d = 2 * n_half;
  if (u.rows() != d || u.cols() != d)
    throw DimensionMismatch("breuer_hall_map: U must be " + std::to_string(d) +
                            "x" + std::to_string(d));
  require_unitary(u, "breuer_hall_map");
  const double asym = (u.transpose() + u).norm();
  if (!(asym <= kUnitarityTolerance))
    throw NotAntisymmetric("breuer_hall_map: U is not antisymmetric (||Uᵗ + "
                           "U|| = " + std::to_string(asym) + ")",
                           asym);
  const double scale = 1.0 / (2.0 * static_cast<double>(n_half - 1));
  return Superoperator::from_function(d, [&](const HermitianMatrix& x) {
    Eigen::MatrixXcd y = -x.matrix() - u * x.matrix().transpose() * u.adjoint();
    y.diagonal().array() += x.trace();
    y *= scale;
    return HermitianMatrix(0.5 * (y + y.adjoint()));
  });
}

/// The n/k coordinate-block projectors P_i = sum_{j<k} |e_{ik+j}><e_{ik+j}|.
inline std::vector<Projector> standard_block_family(Index n, Index k) {
  detail::require_dimension(n);
  if (k < 1 || k > n || n % k != 0)
    throw InvalidRank("standard_block_family: k must divide n (n=" +
                      std::to_string(n) + ", k=" + std::to_string(k) + ")");
  std::vector<Projector> out;
  for (Index i = 0; i < n / k; ++i) {
    Eigen::MatrixXcd frame = Eigen::MatrixXcd::Zero(n, k);
    for (Index j = 0; j < k; ++j) frame(i * k + j, j) = 1.0;
    out.push_back(Projector::from_frame(frame));
  }
  return out;
}

}  // namespace wignerlab
