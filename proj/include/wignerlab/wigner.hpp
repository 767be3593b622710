#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wignerlab/canonical_maps.hpp"
#include "wignerlab/errors.hpp"
#include "wignerlab/operator_space.hpp"
#include "wignerlab/superop.hpp"

namespace wignerlab {

inline constexpr double kDecomposeTolerance = 1e-7;

/// X -> U X U^dagger or U Xᵗ U^dagger, optionally preceded by the reduction
/// map R_k (only meaningful for n = 2k). U carries the phase convention: the
/// first entry with modulus above 1e-6, in column-major order, is real and
/// positive.
struct WignerForm {
  Eigen::MatrixXcd unitary;
  bool transpose = false;
  bool reduced = false;
};

/// What the Choi test saw on one (reduced, transpose) branch.
struct BranchDiagnostics {
  bool reduced = false;
  bool transpose = false;
  double top_eigenvalue = 0.0;
  /// Largest |eigenvalue| after the top one.
  double second_magnitude = 0.0;
  double min_eigenvalue = 0.0;
  /// Set when the Choi test passed and a unitary was extracted.
  std::optional<double> reconstruction_error;
  bool accepted = false;
};

struct Decomposed {
  WignerForm form;
  double reconstruction_error = 0.0;
  std::vector<BranchDiagnostics> branches;
};

struct NotWignerForm {
  std::vector<BranchDiagnostics> branches;
  /// Smallest second-eigenvalue magnitude over the branches tried, scaled by
  /// 1/n. Near-misses show up here.
  double best_residual = std::numeric_limits<double>::infinity();
};

using DecompositionResult = std::variant<Decomposed, NotWignerForm>;

inline bool is_wigner_form(const DecompositionResult& r) {
  return std::holds_alternative<Decomposed>(r);
}

/// Multiplies U by the phase that makes its first significant entry (column
/// major) real and positive.
inline Eigen::MatrixXcd fix_phase(const Eigen::MatrixXcd& u) {
  for (Index j = 0; j < u.cols(); ++j)
    for (Index i = 0; i < u.rows(); ++i) {
      const Complex z = u(i, j);
      const double mag = std::abs(z);
      if (mag > 1e-6) return u * (std::conj(z) / mag);
    }
  return u;
}

inline Superoperator reconstruct(const WignerForm& form, Index k) {
  Superoperator w = wigner_map(form.unitary, form.transpose);
  if (!form.reduced) return w;
  return compose(w, reduction_map(form.unitary.rows(), k));
}

namespace detail {

/// Nearest unitary in Frobenius norm (polar factor).
inline Eigen::MatrixXcd nearest_unitary(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace detail

/// Searches for U, transpose and reduced flags with
///   T = wigner_map(U, transpose) ∘ (R_k if reduced).
///
/// Each branch undoes the candidate transpose/reduction (both involutions that
/// commute), leaving S = T ∘ R_k^r ∘ Θ^t. S is a unitary conjugation exactly
/// when Choi(S) is PSD of rank one with eigenvalue n; the top eigenvector,
/// scaled by sqrt(n) and reshaped with U(a, i) = v[i n + a], is U. Branches are
/// tried non-reduced before reduced and non-transposed before transposed; the
/// first that reconstructs T within `tol` wins.
inline DecompositionResult decompose(const Superoperator& t, Index k,
                                     double tol = kDecomposeTolerance) {
  if (!(tol > 0.0)) throw PreconditionError("decompose: tol must be > 0");
  const Index n = t.dim();
  const double nd = static_cast<double>(n);
  const bool reduced_possible = (2 * k == n);
  std::vector<BranchDiagnostics> diags;
  double best = std::numeric_limits<double>::infinity();

  for (const bool reduced : {false, true}) {
    if (reduced && !reduced_possible) continue;
    for (const bool transpose : {false, true}) {
      BranchDiagnostics d;
      d.reduced = reduced;
      d.transpose = transpose;
      Superoperator s = t;
      if (reduced) s = compose(s, reduction_map(n, k));
      if (transpose) s = compose(s, transpose_map(n));

      const ChoiMatrix choi = choi_of(s);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi.matrix());
      if (es.info() != Eigen::Success)
        throw NumericalError("decompose: Choi eigensolver did not converge");
      const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
      const Index m = ev.size();
      d.top_eigenvalue = ev(m - 1);
      d.min_eigenvalue = ev(0);
      d.second_magnitude = m > 1 ? std::max(std::abs(ev(m - 2)), std::abs(ev(0))) : 0.0;
      best = std::min(best, d.second_magnitude / nd);

      const bool rank_one = d.min_eigenvalue >= -tol * nd &&
                            std::abs(d.top_eigenvalue - nd) <= tol * nd &&
                            d.second_magnitude <= tol * nd;
      if (rank_one) {
        const Eigen::VectorXcd v = std::sqrt(nd) * es.eigenvectors().col(m - 1);
        Eigen::MatrixXcd u(n, n);
        for (Index i = 0; i < n; ++i)
          for (Index a = 0; a < n; ++a) u(a, i) = v(i * n + a);
        WignerForm form{fix_phase(detail::nearest_unitary(u)), transpose, reduced};
        const double err = (reconstruct(form, k).matrix() - t.matrix()).norm();
        d.reconstruction_error = err;
        if (err <= tol) {
          d.accepted = true;
          diags.push_back(d);
          return Decomposed{std::move(form), err, std::move(diags)};
        }
      }
      diags.push_back(d);
    }
  }
  return NotWignerForm{std::move(diags), best};
}

/// Given T mapping the standard block family {P_i} (k | n) to pairwise
/// orthogonal rank-k projectors {Q_i} summing to I, returns a unitary U0 with
/// Q_i = U0 P_i U0^dagger. Columns i k .. i k + k - 1 of U0 span range(Q_i).
/// U0 is one representative of a block-diagonal coset.
inline Eigen::MatrixXcd align_orthogonal_family(const Superoperator& t, Index k,
                                                double tol = 1e-8) {
  const Index n = t.dim();
  const std::vector<Projector> blocks = standard_block_family(n, k);
  std::vector<HermitianMatrix> images;
  images.reserve(blocks.size());
  for (const auto& p : blocks) images.push_back(apply(t, p));

  double violation = 0.0;
  HermitianMatrix sum = HermitianMatrix::zero(n);
  for (std::size_t i = 0; i < images.size(); ++i) {
    violation = std::max(violation, rank_k_deviation(images[i].eigenvalues(), k));
    for (std::size_t j = i + 1; j < images.size(); ++j)
      violation = std::max(violation, std::abs(hs_inner(images[i], images[j])));
    sum = sum + images[i];
  }
  violation = std::max(violation, sum.distance(HermitianMatrix::identity(n)));
  if (violation > tol)
    throw NotABlockPreserver(
        "align_orthogonal_family: block images are not an orthogonal rank-" +
            std::to_string(k) + " resolution of identity (max violation " +
            std::to_string(violation) + ")",
        violation);

  Eigen::MatrixXcd u(n, n);
  for (std::size_t i = 0; i < images.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(images[i].matrix());
    if (es.info() != Eigen::Success)
      throw NumericalError("align_orthogonal_family: eigensolver failed");
    // Ascending order: the last k eigenvectors span the range.
    u.middleCols(static_cast<Index>(i) * k, k) = es.eigenvectors().rightCols(k);
  }
  return detail::nearest_unitary(u);
}

}  // namespace wignerlab
