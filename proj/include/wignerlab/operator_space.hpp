#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wignerlab/errors.hpp"
#include "wignerlab/random.hpp"

namespace wignerlab {

using Complex = std::complex<double>;
using Index = Eigen::Index;

namespace detail {

inline void require_dimension(Index n) {
  if (n < 1)
    throw InvalidDimension("dimension must be positive, got " +
                           std::to_string(n));
}

inline double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Element of the real space of self-adjoint n x n operators.
///
/// Construction from an arbitrary complex matrix checks Hermiticity within
/// 1e-12 (relative to the largest entry, floored at 1) and stores the exact
/// Hermitian part, so downstream eigensolvers always see a symmetric input.
class HermitianMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  explicit HermitianMatrix(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols())
      throw DimensionMismatch("Hermitian matrix must be square");
    detail::require_dimension(m.rows());
    const double dev = detail::max_abs(m - m.adjoint());
    const double scale = std::max(1.0, detail::max_abs(m));
    if (dev > kHermiticityTolerance * scale)
      throw NotHermitian("matrix is not Hermitian (max |X - X^dagger| = " +
                             std::to_string(dev) + ")",
                         dev);
    m_ = 0.5 * (m + m.adjoint());
  }

  static HermitianMatrix zero(Index n) {
    detail::require_dimension(n);
    return HermitianMatrix(Trusted{}, Eigen::MatrixXcd::Zero(n, n));
  }

  static HermitianMatrix identity(Index n) {
    detail::require_dimension(n);
    return HermitianMatrix(Trusted{}, Eigen::MatrixXcd::Identity(n, n));
  }

  static HermitianMatrix diagonal(std::span<const double> values) {
    const Index n = static_cast<Index>(values.size());
    detail::require_dimension(n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
    return HermitianMatrix(Trusted{}, std::move(m));
  }

  static HermitianMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  /// |v><v| scaled by `weight`.
  static HermitianMatrix outer(const Eigen::VectorXcd& v, double weight = 1.0) {
    detail::require_dimension(v.size());
    return HermitianMatrix(Trusted{}, weight * (v * v.adjoint()));
  }

  Index dim() const noexcept { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }

  /// Real spectrum, sorted descending.
  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericalError("Hermitian eigensolver did not converge");
    return es.eigenvalues().reverse();
  }

  HermitianMatrix operator+(const HermitianMatrix& o) const {
    check_same(o);
    return HermitianMatrix(Trusted{}, m_ + o.m_);
  }
  HermitianMatrix operator-(const HermitianMatrix& o) const {
    check_same(o);
    return HermitianMatrix(Trusted{}, m_ - o.m_);
  }
  HermitianMatrix operator-() const { return HermitianMatrix(Trusted{}, -m_); }
  HermitianMatrix operator*(double s) const {
    return HermitianMatrix(Trusted{}, s * m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) {
    return h * s;
  }

  /// Xᵗ in the standard basis (equal to the entrywise conjugate).
  HermitianMatrix transposed() const {
    return HermitianMatrix(Trusted{}, m_.transpose());
  }

  /// Frobenius norm of the difference.
  double distance(const HermitianMatrix& o) const {
    check_same(o);
    return (m_ - o.m_).norm();
  }

  bool operator==(const HermitianMatrix& o) const {
    return dim() == o.dim() && m_ == o.m_;
  }

 private:
  struct Trusted {};
  HermitianMatrix(Trusted, Eigen::MatrixXcd m) : m_(std::move(m)) {}

  void check_same(const HermitianMatrix& o) const {
    if (dim() != o.dim())
      throw DimensionMismatch("dimension mismatch: " + std::to_string(dim()) +
                              " vs " + std::to_string(o.dim()));
  }

  friend HermitianMatrix from_coordinates(Index, const Eigen::VectorXd&);

  Eigen::MatrixXcd m_;
};

// Hermitian basis coordinates ----------------------------------------------
//
// Fixed ordering for dimension n:
//   0               I/sqrt(n)
//   1 .. n-1        D_l = (sum_{m<l} |m><m| - l |l><l|) / sqrt(l(l+1))
//   next n(n-1)/2   S_ij = (|i><j| + |j><i|)/sqrt(2),   i<j lexicographic
//   last n(n-1)/2   A_ij = i(|i><j| - |j><i|)/sqrt(2),  same order

inline Index coordinate_dim(Index n) { return n * n; }

/// <B_a, X>_HS for every basis element, computed without materializing the
/// basis.
inline Eigen::VectorXd coordinates(const HermitianMatrix& x) {
  const Index n = x.dim();
  const auto& m = x.matrix();
  Eigen::VectorXd c(n * n);
  double running = 0.0;
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += m(i, i).real();
  c(0) = total / std::sqrt(static_cast<double>(n));
  for (Index l = 1; l < n; ++l) {
    running += m(l - 1, l - 1).real();
    const double ld = static_cast<double>(l);
    c(l) = (running - ld * m(l, l).real()) / std::sqrt(ld * (ld + 1.0));
  }
  const Index off = n * (n - 1) / 2;
  const double r2 = std::sqrt(2.0);
  Index p = n;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j, ++p) {
      c(p) = r2 * m(i, j).real();
      c(p + off) = r2 * m(i, j).imag();
    }
  return c;
}

inline HermitianMatrix from_coordinates(Index n, const Eigen::VectorXd& c) {
  detail::require_dimension(n);
  if (c.size() != n * n)
    throw DimensionMismatch("coordinate vector has length " +
                            std::to_string(c.size()) + ", expected " +
                            std::to_string(n * n));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const double id = c(0) / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; ++i) m(i, i) = id;
  for (Index l = 1; l < n; ++l) {
    const double ld = static_cast<double>(l);
    const double w = c(l) / std::sqrt(ld * (ld + 1.0));
    for (Index mm = 0; mm < l; ++mm) m(mm, mm) += w;
    m(l, l) -= ld * w;
  }
  const Index off = n * (n - 1) / 2;
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  Index p = n;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j, ++p) {
      const Complex z(inv_r2 * c(p), inv_r2 * c(p + off));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  return HermitianMatrix(HermitianMatrix::Trusted{}, std::move(m));
}

/// Ordered HS-orthonormal basis of the n^2-dimensional real space.
struct HermitianBasis {
  Index n;
  std::vector<HermitianMatrix> elements;

  std::size_t size() const noexcept { return elements.size(); }
  const HermitianMatrix& operator[](std::size_t a) const { return elements[a]; }
};

inline HermitianBasis hermitian_basis(Index n) {
  detail::require_dimension(n);
  HermitianBasis basis{n, {}};
  basis.elements.reserve(static_cast<std::size_t>(n * n));
  for (Index a = 0; a < n * n; ++a)
    basis.elements.push_back(
        from_coordinates(n, Eigen::VectorXd::Unit(n * n, a)));
  return basis;
}

// Inner products and norms ---------------------------------------------------

inline double hs_inner(const HermitianMatrix& x, const HermitianMatrix& y) {
  if (x.dim() != y.dim())
    throw DimensionMismatch("hs_inner: dimension mismatch " +
                            std::to_string(x.dim()) + " vs " +
                            std::to_string(y.dim()));
  // Tr(XY) = sum_ij X_ij conj(Y_ij) when Y is Hermitian.
  return x.matrix().cwiseProduct(y.matrix().conjugate()).sum().real();
}

inline double trace_norm(const HermitianMatrix& x) {
  return x.eigenvalues().cwiseAbs().sum();
}

// Projectors -----------------------------------------------------------------

/// Largest distance of an eigenvalue of `x` from the rank-k projector pattern
/// (top k eigenvalues equal 1, the rest 0). Zero exactly on rank-k projectors.
inline double rank_k_deviation(const Eigen::VectorXd& descending, Index k) {
  double dev = 0.0;
  for (Index i = 0; i < descending.size(); ++i)
    dev = std::max(dev, std::abs(descending(i) - (i < k ? 1.0 : 0.0)));
  return dev;
}

/// Count of eigenvalues above 1/2, provided every eigenvalue lies within
/// `tol` of 0 or 1.
inline Index projector_rank(const HermitianMatrix& x, double tol = 1e-9) {
  if (!(tol > 0.0)) throw PreconditionError("projector_rank: tol must be > 0");
  const Eigen::VectorXd ev = x.eigenvalues();
  double worst = 0.0;
  Index rank = 0;
  for (Index i = 0; i < ev.size(); ++i) {
    const double d = std::min(std::abs(ev(i)), std::abs(ev(i) - 1.0));
    worst = std::max(worst, d);
    if (ev(i) > 0.5) ++rank;
  }
  if (worst > tol)
    throw NotAProjector("eigenvalue at distance " + std::to_string(worst) +
                            " from {0,1}",
                        worst);
  return rank;
}

/// A rank-k orthogonal projector. Holds the Hermitian matrix and its rank.
class Projector {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  /// Validates that `p` is a projector and records its rank.
  explicit Projector(HermitianMatrix p, double tol = kDefaultTolerance)
      : p_(std::move(p)), rank_(projector_rank(p_, tol)) {}

  /// P = Q Q^dagger for a matrix with orthonormal columns.
  static Projector from_frame(const Eigen::MatrixXcd& q) {
    detail::require_dimension(q.rows());
    if (q.cols() < 1 || q.cols() > q.rows())
      throw InvalidRank("frame must have between 1 and n columns");
    return Projector(HermitianMatrix(q * q.adjoint()), q.cols(), Trusted{});
  }

  const HermitianMatrix& matrix() const noexcept { return p_; }
  operator const HermitianMatrix&() const noexcept { return p_; }
  Index rank() const noexcept { return rank_; }
  Index dim() const noexcept { return p_.dim(); }

 private:
  struct Trusted {};
  Projector(HermitianMatrix p, Index rank, Trusted)
      : p_(std::move(p)), rank_(rank) {}

  HermitianMatrix p_;
  Index rank_;
};

/// Haar-random orthonormal n x k frame.
inline Eigen::MatrixXcd random_frame(Index n, Index k, std::uint64_t seed) {
  Rng rng(seed);
  return orthonormalize_columns(gaussian_complex(n, k, rng));
}

/// Haar-distributed rank-k projector, deterministic in (n, k, seed).
inline Projector random_projector(Index n, Index k, std::uint64_t seed) {
  detail::require_dimension(n);
  if (k < 1 || k > n)
    throw InvalidRank("rank must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ")");
  if (k == n) return Projector(HermitianMatrix::identity(n));
  return Projector::from_frame(random_frame(n, k, seed));
}

/// Hermitian matrix with i.i.d. standard Gaussian basis coordinates.
inline HermitianMatrix random_hermitian(Index n, std::uint64_t seed) {
  detail::require_dimension(n);
  Rng rng(seed);
  return from_coordinates(n, gaussian_real(n * n, 1, rng).col(0));
}

}  // namespace wignerlab
