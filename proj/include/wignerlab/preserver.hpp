#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wignerlab/errors.hpp"
#include "wignerlab/operator_space.hpp"
#include "wignerlab/random.hpp"
#include "wignerlab/superop.hpp"

namespace wignerlab {

inline constexpr std::size_t kDefaultTrials = 200;
inline constexpr double kDefaultCheckTolerance = 1e-8;

/// Offending sample of a sampled check. `trial` indexes the generator stream
/// derive_seed(seed, trial) so the inputs can be regenerated.
struct Witness {
  std::size_t trial = 0;
  std::vector<HermitianMatrix> inputs;
  std::vector<HermitianMatrix> outputs;
  /// Check-specific scalar (output rank, eigenvalue, norm, ...).
  double value = 0.0;
};

/// Outcome of one structural check. passed == (max_violation <= tolerance).
/// Sampled checks refute soundly but only gather evidence when they pass;
/// `trials` records how much.
struct CheckReport {
  std::string name;
  bool passed = false;
  std::size_t trials = 0;
  double tolerance = 0.0;
  double max_violation = 0.0;
  std::optional<Witness> witness;
  std::map<std::string, double> statistics;
};

namespace detail {

inline CheckReport finish(CheckReport r) {
  r.passed = r.max_violation <= r.tolerance;
  return r;
}

inline void require_positive_tol(double tol, const char* who) {
  if (!(tol > 0.0)) throw PreconditionError(std::string(who) + ": tol must be > 0");
}

inline void require_trials(std::size_t trials, const char* who) {
  if (trials < 1) throw PreconditionError(std::string(who) + ": trials must be >= 1");
}

}  // namespace detail

// Deterministic samplers. Checks draw trial t from derive_seed(seed, t).

inline Projector sample_projector(Index n, Index k, std::uint64_t seed,
                                  std::size_t trial) {
  return random_projector(n, k, derive_seed(seed, trial));
}

/// Two orthogonal rank-k projectors from one Haar 2k-frame.
inline std::pair<Projector, Projector> sample_orthogonal_pair(
    Index n, Index k, std::uint64_t seed, std::size_t trial) {
  const Eigen::MatrixXcd frame = random_frame(n, 2 * k, derive_seed(seed, trial));
  return {Projector::from_frame(frame.leftCols(k)),
          Projector::from_frame(frame.rightCols(k))};
}

/// Sum of q mutually orthogonal rank-k projectors.
inline HermitianMatrix sample_rank_qk(Index n, Index k, Index q,
                                      std::uint64_t seed, std::size_t trial) {
  const Eigen::MatrixXcd frame = random_frame(n, q * k, derive_seed(seed, trial));
  HermitianMatrix sum = HermitianMatrix::zero(n);
  for (Index i = 0; i < q; ++i)
    sum = sum + Projector::from_frame(frame.middleCols(i * k, k)).matrix();
  return sum;
}

inline HermitianMatrix sample_hermitian(Index n, std::uint64_t seed,
                                        std::size_t trial) {
  return random_hermitian(n, derive_seed(seed, trial));
}

// Exact (non-sampled) checks ---------------------------------------------------

/// Unital: T(I) = I. Violation is ||T(I) - I||_F.
inline CheckReport is_unital(const Superoperator& t,
                             double tol = kDefaultCheckTolerance) {
  detail::require_positive_tol(tol, "is_unital");
  const auto id = HermitianMatrix::identity(t.dim());
  CheckReport r{"is_unital", false, 0, tol, apply(t, id).distance(id), {}, {}};
  return detail::finish(std::move(r));
}

/// Trace preserving: the dual fixes I. Violation is ||T*(I) - I||_F.
inline CheckReport is_trace_preserving(const Superoperator& t,
                                       double tol = kDefaultCheckTolerance) {
  detail::require_positive_tol(tol, "is_trace_preserving");
  const auto id = HermitianMatrix::identity(t.dim());
  CheckReport r{"is_trace_preserving", false, 0, tol,
                apply(dual(t), id).distance(id), {}, {}};
  return detail::finish(std::move(r));
}

/// ||Tᵀ T - I||_F <= tol.
inline CheckReport is_hs_isometry(const Superoperator& t,
                                  double tol = kDefaultCheckTolerance) {
  detail::require_positive_tol(tol, "is_hs_isometry");
  const Index d = t.matrix().rows();
  const double dev =
      (t.matrix().transpose() * t.matrix() - Eigen::MatrixXd::Identity(d, d))
          .norm();
  CheckReport r{"is_hs_isometry", false, 0, tol, dev, {}, {}};
  r.statistics["smallest_singular_value"] = smallest_singular_value(t);
  return detail::finish(std::move(r));
}

/// Passes iff the smallest singular value is at least `floor`.
inline CheckReport is_invertible(const Superoperator& t, double floor = 1e-8) {
  const Eigen::VectorXd s = singular_values(t);
  const double smin = s(s.size() - 1);
  CheckReport r{"is_invertible", false, 0, 0.0, std::max(0.0, floor - smin), {}, {}};
  r.statistics["smallest_singular_value"] = smin;
  r.statistics["largest_singular_value"] = s(0);
  r.statistics["floor"] = floor;
  return detail::finish(std::move(r));
}

/// Every eigenvalue has modulus within tol of 1 and some eigenvalue is within
/// tol of +1.
inline CheckReport unit_circle_spectrum(const Superoperator& t,
                                        double tol = kDefaultCheckTolerance) {
  detail::require_positive_tol(tol, "unit_circle_spectrum");
  const std::vector<Complex> ev = spectrum(t);
  double modulus_dev = 0.0;
  double nearest_one = std::numeric_limits<double>::infinity();
  for (const Complex& z : ev) {
    modulus_dev = std::max(modulus_dev, std::abs(std::abs(z) - 1.0));
    nearest_one = std::min(nearest_one, std::abs(z - 1.0));
  }
  CheckReport r{"unit_circle_spectrum", false, 0, tol,
                std::max(modulus_dev, nearest_one), {}, {}};
  r.statistics["max_modulus_deviation"] = modulus_dev;
  r.statistics["distance_to_plus_one"] = nearest_one;
  r.statistics["spectral_radius"] = ev.empty() ? 0.0 : std::abs(ev.front());
  r.statistics["smallest_modulus"] = ev.empty() ? 0.0 : std::abs(ev.back());
  return detail::finish(std::move(r));
}

// Sampled checks ----------------------------------------------------------------

/// Images of Haar rank-k projectors must be rank-k projectors. The per-trial
/// violation is the largest eigenvalue distance from the rank-k pattern; the
/// witness value is the rank of the image's positive part (eigenvalues above
/// tol).
inline CheckReport preserves_rank_k(const Superoperator& t, Index k,
                                    std::size_t trials = kDefaultTrials,
                                    std::uint64_t seed = 0,
                                    double tol = kDefaultCheckTolerance) {
  detail::require_trials(trials, "preserves_rank_k");
  detail::require_positive_tol(tol, "preserves_rank_k");
  const Index n = t.dim();
  CheckReport r{"preserves_rank_k", false, trials, tol, 0.0, {}, {}};
  r.statistics["k"] = static_cast<double>(k);
  for (std::size_t i = 0; i < trials; ++i) {
    const Projector p = sample_projector(n, k, seed, i);
    HermitianMatrix out = apply(t, p);
    const Eigen::VectorXd ev = out.eigenvalues();
    const double v = rank_k_deviation(ev, k);
    if (v > r.max_violation) {
      r.max_violation = v;
      if (v > tol) {
        const auto rank = (ev.array() > tol).count();
        r.witness = Witness{i, {p.matrix()}, {std::move(out)}, static_cast<double>(rank)};
      }
    }
  }
  return detail::finish(std::move(r));
}

/// Pairs of orthogonal rank-k projectors must have HS-orthogonal images.
/// Vacuous pass when 2k > n.
inline CheckReport preserves_orthogonality(const Superoperator& t, Index k,
                                           std::size_t trials = kDefaultTrials,
                                           std::uint64_t seed = 0,
                                           double tol = kDefaultCheckTolerance) {
  detail::require_trials(trials, "preserves_orthogonality");
  detail::require_positive_tol(tol, "preserves_orthogonality");
  const Index n = t.dim();
  if (k < 1) throw InvalidRank("preserves_orthogonality: k must be >= 1");
  CheckReport r{"preserves_orthogonality", false, trials, tol, 0.0, {}, {}};
  r.statistics["k"] = static_cast<double>(k);
  if (2 * k > n) {
    r.trials = 0;
    r.statistics["vacuous"] = 1.0;
    return detail::finish(std::move(r));
  }
  for (std::size_t i = 0; i < trials; ++i) {
    auto [p, q] = sample_orthogonal_pair(n, k, seed, i);
    HermitianMatrix tp = apply(t, p);
    HermitianMatrix tq = apply(t, q);
    const double ip = hs_inner(tp, tq);
    const double v = std::abs(ip);
    if (v > r.max_violation) {
      r.max_violation = v;
      if (v > tol)
        r.witness = Witness{i, {p.matrix(), q.matrix()}, {std::move(tp), std::move(tq)}, ip};
    }
  }
  return detail::finish(std::move(r));
}

/// Images of rank-qk projectors, drawn as sums of q orthogonal rank-k
/// projectors, must be rank-qk projectors.
inline CheckReport preserves_rank_qk(const Superoperator& t, Index k, Index q,
                                     std::size_t trials = kDefaultTrials,
                                     std::uint64_t seed = 0,
                                     double tol = kDefaultCheckTolerance) {
  detail::require_trials(trials, "preserves_rank_qk");
  detail::require_positive_tol(tol, "preserves_rank_qk");
  const Index n = t.dim();
  if (k < 1 || q < 1 || q * k > n)
    throw InvalidRank("preserves_rank_qk: need q*k <= n (q=" + std::to_string(q) +
                      ", k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  CheckReport r{"preserves_rank_qk", false, trials, tol, 0.0, {}, {}};
  r.statistics["k"] = static_cast<double>(k);
  r.statistics["q"] = static_cast<double>(q);
  for (std::size_t i = 0; i < trials; ++i) {
    HermitianMatrix p = sample_rank_qk(n, k, q, seed, i);
    HermitianMatrix out = apply(t, p);
    const Eigen::VectorXd ev = out.eigenvalues();
    const double v = rank_k_deviation(ev, q * k);
    if (v > r.max_violation) {
      r.max_violation = v;
      if (v > tol) {
        const auto rank = (ev.array() > tol).count();
        r.witness = Witness{i, {std::move(p)}, {std::move(out)}, static_cast<double>(rank)};
      }
    }
  }
  return detail::finish(std::move(r));
}

/// Minimum eigenvalue of images of Haar rank-1 projectors must be >= -tol.
/// Rank-1 inputs suffice: every PSD matrix is a nonnegative combination.
inline CheckReport is_positive_sampled(const Superoperator& t,
                                       std::size_t trials = kDefaultTrials,
                                       std::uint64_t seed = 0,
                                       double tol = kDefaultCheckTolerance) {
  detail::require_trials(trials, "is_positive_sampled");
  detail::require_positive_tol(tol, "is_positive_sampled");
  const Index n = t.dim();
  CheckReport r{"is_positive_sampled", false, trials, tol, 0.0, {}, {}};
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    const Projector p = sample_projector(n, 1, seed, i);
    HermitianMatrix out = apply(t, p);
    const double lo = out.eigenvalues()(n - 1);
    min_eig = std::min(min_eig, lo);
    const double v = std::max(0.0, -lo);
    if (v > r.max_violation) {
      r.max_violation = v;
      if (v > tol) r.witness = Witness{i, {p.matrix()}, {std::move(out)}, lo};
    }
  }
  r.statistics["min_eigenvalue"] = min_eig;
  return detail::finish(std::move(r));
}

/// For trace-preserving T, positivity is equivalent to ||T(X)||_1 <= ||X||_1
/// for all Hermitian X. Samples Gaussian X; also records the largest
/// |‖T(X0)‖_1 - ‖X0‖_1| over the traceless parts X0 = X - (Tr X / n) I.
inline CheckReport trace_norm_contraction_check(const Superoperator& t,
                                                std::size_t trials = kDefaultTrials,
                                                std::uint64_t seed = 0,
                                                double tol = 1e-9) {
  detail::require_trials(trials, "trace_norm_contraction_check");
  detail::require_positive_tol(tol, "trace_norm_contraction_check");
  const CheckReport tp = is_trace_preserving(t, 1e-9);
  if (!tp.passed)
    throw PreconditionError(
        "trace_norm_contraction_check: map is not trace-preserving (violation " +
        std::to_string(tp.max_violation) + ")");
  const Index n = t.dim();
  const auto id = HermitianMatrix::identity(n);
  CheckReport r{"trace_norm_contraction", false, trials, tol, 0.0, {}, {}};
  double traceless_dev = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    HermitianMatrix x = sample_hermitian(n, seed, i);
    HermitianMatrix tx = apply(t, x);
    const double in_norm = trace_norm(x);
    const double out_norm = trace_norm(tx);
    const double v = std::max(0.0, out_norm - in_norm);
    if (v > r.max_violation) {
      r.max_violation = v;
      if (v > tol) r.witness = Witness{i, {x}, {tx}, out_norm};
    }
    const HermitianMatrix x0 = x - id * (x.trace() / static_cast<double>(n));
    traceless_dev =
        std::max(traceless_dev, std::abs(trace_norm(apply(t, x0)) - trace_norm(x0)));
  }
  r.statistics["traceless_max_deviation"] = traceless_dev;
  return detail::finish(std::move(r));
}

/// S(X) = T(X) + (Tr X / k)(I - T(I)): the rank-k self-map induced by a map
/// that preserves P_l when n = k + q l. Equals T when T is unital.
inline Superoperator induced_rank_k_map(const Superoperator& t, Index k) {
  const Index n = t.dim();
  if (k < 1 || k >= n)
    throw InvalidRank("induced_rank_k_map: need 1 <= k < n");
  const auto id = HermitianMatrix::identity(n);
  const Eigen::VectorXd defect = coordinates(id - apply(t, id));
  // Tr X = sqrt(n) x_0.
  Eigen::MatrixXd m = t.matrix();
  m.col(0) += (std::sqrt(static_cast<double>(n)) / static_cast<double>(k)) * defect;
  return Superoperator(n, std::move(m));
}

}  // namespace wignerlab
