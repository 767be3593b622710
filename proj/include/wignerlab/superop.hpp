#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wignerlab/errors.hpp"
#include "wignerlab/operator_space.hpp"

namespace wignerlab {

/// Linear map on Hermitian n x n matrices, stored as the real n^2 x n^2 matrix
/// of its action on hermitian_basis(n) coordinates: T_ab = <B_a, T(B_b)>.
class Superoperator {
 public:
  Superoperator(Index n, Eigen::MatrixXd matrix) : n_(n), m_(std::move(matrix)) {
    detail::require_dimension(n);
    if (m_.rows() != n * n || m_.cols() != n * n)
      throw DimensionMismatch("superoperator matrix must be " +
                              std::to_string(n * n) + "x" +
                              std::to_string(n * n) + ", got " +
                              std::to_string(m_.rows()) + "x" +
                              std::to_string(m_.cols()));
    if (!m_.allFinite())
      throw PreconditionError("superoperator has non-finite entries");
  }

  static Superoperator identity(Index n) {
    return Superoperator(n, Eigen::MatrixXd::Identity(n * n, n * n));
  }
  static Superoperator zero(Index n) {
    return Superoperator(n, Eigen::MatrixXd::Zero(n * n, n * n));
  }

  /// Tabulates an arbitrary Hermiticity-preserving linear function.
  template <typename F>
  static Superoperator from_function(Index n, F&& f) {
    detail::require_dimension(n);
    Eigen::MatrixXd m(n * n, n * n);
    for (Index b = 0; b < n * n; ++b) {
      const HermitianMatrix basis_b =
          from_coordinates(n, Eigen::VectorXd::Unit(n * n, b));
      const HermitianMatrix image = f(basis_b);
      if (image.dim() != n)
        throw DimensionMismatch("function changed the matrix dimension");
      m.col(b) = coordinates(image);
    }
    return Superoperator(n, std::move(m));
  }

  Index dim() const noexcept { return n_; }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  bool operator==(const Superoperator& o) const {
    return n_ == o.n_ && m_ == o.m_;
  }

 private:
  Index n_;
  Eigen::MatrixXd m_;
};

namespace detail {
inline void require_same(const Superoperator& a, const Superoperator& b,
                         const char* op) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(op) + ": dimension mismatch " +
                            std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
}
}  // namespace detail

inline HermitianMatrix apply(const Superoperator& t, const HermitianMatrix& x) {
  if (t.dim() != x.dim())
    throw DimensionMismatch("apply: map acts on dimension " +
                            std::to_string(t.dim()) + ", input has " +
                            std::to_string(x.dim()));
  return from_coordinates(t.dim(), t.matrix() * coordinates(x));
}

/// first ∘ second, i.e. X -> first(second(X)).
inline Superoperator compose(const Superoperator& first,
                             const Superoperator& second) {
  detail::require_same(first, second, "compose");
  return Superoperator(first.dim(), first.matrix() * second.matrix());
}

/// HS-adjoint. The basis is orthonormal, so this is the transpose.
inline Superoperator dual(const Superoperator& t) {
  return Superoperator(t.dim(), t.matrix().transpose());
}

/// Singular values in descending order.
inline Eigen::VectorXd singular_values(const Superoperator& t) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.matrix());
  return svd.singularValues();
}

inline double smallest_singular_value(const Superoperator& t) {
  const Eigen::VectorXd s = singular_values(t);
  return s(s.size() - 1);
}

/// Fails when the smallest singular value is at most `rel_tol` times the
/// largest.
inline Superoperator inverse(const Superoperator& t, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      t.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > rel_tol * smax))
    throw NotInvertible("superoperator is not invertible (smallest singular "
                        "value " + std::to_string(smin) + ")",
                        smin);
  Eigen::MatrixXd inv = svd.matrixV() * s.cwiseInverse().asDiagonal() *
                        svd.matrixU().transpose();
  return Superoperator(t.dim(), std::move(inv));
}

/// Eigenvalues of the real matrix, sorted by descending modulus, ties broken
/// by descending real part.
inline std::vector<Complex> spectrum(const Superoperator& t) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(t.matrix(), false);
  if (es.info() != Eigen::Success)
    throw NumericalError("superoperator eigensolver did not converge");
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<Complex> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

// Choi representation --------------------------------------------------------

/// sum_ij E_ij ⊗ T(E_ij), an n^2 x n^2 Hermitian matrix. Row index i*n + a
/// pairs the outer (input) factor i with the inner (output) factor a.
class ChoiMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-10;

  ChoiMatrix(Index n, Eigen::MatrixXcd entries, double tol = kHermiticityTolerance)
      : n_(n), c_(std::move(entries)) {
    detail::require_dimension(n);
    if (c_.rows() != n * n || c_.cols() != n * n)
      throw DimensionMismatch("Choi matrix must be " + std::to_string(n * n) +
                              "x" + std::to_string(n * n));
    const double dev = detail::max_abs(c_ - c_.adjoint());
    if (dev > tol * std::max(1.0, detail::max_abs(c_)))
      throw NotHermitian("Choi matrix is not Hermitian (max deviation " +
                             std::to_string(dev) + ")",
                         dev);
    c_ = 0.5 * (c_ + c_.adjoint());
  }

  Index dim() const noexcept { return n_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return c_; }

  /// Real spectrum, descending.
  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c_,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericalError("Choi eigensolver did not converge");
    return es.eigenvalues().reverse();
  }

 private:
  Index n_;
  Eigen::MatrixXcd c_;
};

namespace detail {

/// Complex-linear extension: T(X) = T(H1) + i T(H2) with X = H1 + i H2.
inline Eigen::MatrixXcd apply_complex(const Superoperator& t,
                                      const Eigen::MatrixXcd& x) {
  const HermitianMatrix h1(0.5 * (x + x.adjoint()));
  const HermitianMatrix h2(Complex(0.0, -0.5) * (x - x.adjoint()));
  return apply(t, h1).matrix() + Complex(0.0, 1.0) * apply(t, h2).matrix();
}

}  // namespace detail

inline ChoiMatrix choi_of(const Superoperator& t) {
  const Index n = t.dim();
  Eigen::MatrixXcd c(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
      e(i, j) = 1.0;
      c.block(i * n, j * n, n, n) = detail::apply_complex(t, e);
    }
  return ChoiMatrix(n, std::move(c));
}

inline Superoperator superop_of_choi(const ChoiMatrix& c) {
  const Index n = c.dim();
  const auto& cm = c.matrix();
  return Superoperator::from_function(n, [&](const HermitianMatrix& x) {
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const Complex w = x(i, j);
        if (w != Complex(0.0, 0.0)) y += w * cm.block(i * n, j * n, n, n);
      }
    return HermitianMatrix(y);
  });
}

}  // namespace wignerlab
