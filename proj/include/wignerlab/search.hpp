#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wignerlab/canonical_maps.hpp"
#include "wignerlab/errors.hpp"
#include "wignerlab/operator_space.hpp"
#include "wignerlab/preserver.hpp"
#include "wignerlab/random.hpp"
#include "wignerlab/superop.hpp"
#include "wignerlab/wigner.hpp"

namespace wignerlab {

/// Gradient-descent probe for surjective rank-k self-maps on dimension n = 2k.
struct SearchConfig {
  Index k = 1;
  std::size_t restarts = 20;
  std::size_t max_iterations = 3000;
  std::size_t sample_projectors = 16;
  double step_size = 0.5;
  double invertibility_floor = 0.1;
  std::uint64_t seed = 0;
  double residual_accept = 1e-10;

  /// Defaults for rank k. With n = 2k, 4 n^2 samples: fewer admit spurious
  /// zero-loss maps (at n = 2, 8 samples leave a family of non-isometric maps
  /// sending every sample onto the Bloch sphere).
  static SearchConfig defaults(Index k) {
    SearchConfig c;
    c.k = k;
    c.sample_projectors = static_cast<std::size_t>(16 * k * k);
    return c;
  }

  void validate() const {
    if (k < 1) throw InvalidRank("search: k must be >= 1");
    if (restarts < 1 || max_iterations < 1 || sample_projectors < 1)
      throw PreconditionError("search: counts must be >= 1");
    if (!(step_size > 0.0)) throw PreconditionError("search: step_size must be > 0");
    if (!(residual_accept > 0.0))
      throw PreconditionError("search: residual_accept must be > 0");
    if (!(invertibility_floor >= 0.0))
      throw PreconditionError("search: invertibility_floor must be >= 0");
  }
};

enum class CandidateVerdict { KnownForm, ConjectureCandidate };

inline const char* to_string(CandidateVerdict v) {
  return v == CandidateVerdict::KnownForm ? "KnownForm" : "ConjectureCandidate";
}

struct Candidate {
  Superoperator map = Superoperator::identity(1);
  double residual = 0.0;
  std::size_t restart = 0;
  std::size_t iterations = 0;
  /// Samples are sample_projector(n, k, sample_seed, i), i < sample_count.
  std::uint64_t sample_seed = 0;
  std::size_t sample_count = 0;
  /// Top-k eigengap across sample images at the returned point.
  double min_sample_gap = 0.0;
  bool resampled = false;
  DecompositionResult classification = NotWignerForm{};
  std::vector<CheckReport> check_summary;
};

struct CandidateReport {
  CandidateVerdict verdict = CandidateVerdict::ConjectureCandidate;
  DecompositionResult decomposition = NotWignerForm{};
  std::vector<CheckReport> checks;
};

// Loss -----------------------------------------------------------------------

/// Frobenius distance from Y to the nearest rank-k projector.
inline double projector_manifold_distance(const HermitianMatrix& y, Index k) {
  const Eigen::VectorXd ev = y.eigenvalues();
  double s = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    const double d = i < k ? ev(i) - 1.0 : ev(i);
    s += d * d;
  }
  return std::sqrt(s);
}

inline std::vector<Projector> search_samples(Index n, Index k, std::uint64_t seed,
                                             std::size_t count) {
  std::vector<Projector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_projector(n, k, seed, i));
  return out;
}

namespace detail {

inline void require_half_dimension(Index n, Index k) {
  if (n != 2 * k)
    throw DimensionMismatch("search loss requires n = 2k (n=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + ")");
}

inline std::vector<Eigen::VectorXd> sample_coordinates(
    const std::vector<Projector>& samples) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(samples.size());
  for (const auto& p : samples) out.push_back(coordinates(p.matrix()));
  return out;
}

/// Loss over raw matrix entries. Optionally writes the gradient: the squared
/// distance to the rank-k manifold has gradient 2 (Y - Π(Y)), Π the nearest
/// projector, which pulls back through Y = T p as 2 (y - π) pᵀ. The penalty
/// (floor - σ_min)_+^2 has gradient -2 (floor - σ_min) u vᵀ.
inline double loss_impl(const Eigen::MatrixXd& t, Index n, Index k,
                        const std::vector<Eigen::VectorXd>& coords, double floor,
                        Eigen::MatrixXd* grad, double* min_gap = nullptr) {
  const double inv_count = 1.0 / static_cast<double>(coords.size());
  double total = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  if (grad) grad->setZero(t.rows(), t.cols());
  for (const auto& p : coords) {
    const Eigen::VectorXd y = t * p;
    const HermitianMatrix ym = from_coordinates(n, y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        ym.matrix(), grad ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericalError("search loss: eigensolver did not converge");
    const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
    double d2 = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double target = i >= n - k ? 1.0 : 0.0;
      d2 += (ev(i) - target) * (ev(i) - target);
    }
    total += d2;
    if (k < n) gap = std::min(gap, ev(n - k) - ev(n - k - 1));
    if (grad) {
      const Eigen::MatrixXcd top = es.eigenvectors().rightCols(k);
      const HermitianMatrix nearest(top * top.adjoint());
      const Eigen::VectorXd g = 2.0 * inv_count * (y - coordinates(nearest));
      grad->noalias() += g * p.transpose();
    }
  }
  total *= inv_count;
  if (min_gap) *min_gap = gap;

  if (floor > 0.0) {
    if (grad) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Index last = svd.singularValues().size() - 1;
      const double smin = svd.singularValues()(last);
      const double short_by = std::max(0.0, floor - smin);
      total += short_by * short_by;
      if (short_by > 0.0)
        grad->noalias() -=
            2.0 * short_by * svd.matrixU().col(last) * svd.matrixV().col(last).transpose();
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
      const double smin = svd.singularValues()(svd.singularValues().size() - 1);
      const double short_by = std::max(0.0, floor - smin);
      total += short_by * short_by;
    }
  }
  return total;
}

}  // namespace detail

/// Mean squared manifold distance of the sample images plus the
/// invertibility penalty max(0, floor - σ_min)^2.
inline double loss(const Superoperator& t, Index k, const std::vector<Projector>& samples,
                   double floor) {
  detail::require_half_dimension(t.dim(), k);
  if (samples.empty()) throw PreconditionError("loss: need at least one sample");
  return detail::loss_impl(t.matrix(), t.dim(), k, detail::sample_coordinates(samples),
                           floor, nullptr);
}

inline Eigen::MatrixXd loss_gradient(const Superoperator& t, Index k,
                                     const std::vector<Projector>& samples, double floor) {
  detail::require_half_dimension(t.dim(), k);
  Eigen::MatrixXd g;
  detail::loss_impl(t.matrix(), t.dim(), k, detail::sample_coordinates(samples), floor, &g);
  return g;
}

/// Central differences with stencil `h`, entry by entry.
inline Eigen::MatrixXd finite_difference_gradient(const Superoperator& t, Index k,
                                                  const std::vector<Projector>& samples,
                                                  double floor, double h = 1e-5) {
  detail::require_half_dimension(t.dim(), k);
  const auto coords = detail::sample_coordinates(samples);
  Eigen::MatrixXd m = t.matrix();
  Eigen::MatrixXd g(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const double keep = m(i, j);
      m(i, j) = keep + h;
      const double up = detail::loss_impl(m, t.dim(), k, coords, floor, nullptr);
      m(i, j) = keep - h;
      const double down = detail::loss_impl(m, t.dim(), k, coords, floor, nullptr);
      m(i, j) = keep;
      g(i, j) = (up - down) / (2.0 * h);
    }
  return g;
}

/// Recomputes a candidate's residual from its stored samples.
inline double recompute_residual(const Candidate& c, Index k, double floor) {
  return loss(c.map, k, search_samples(c.map.dim(), k, c.sample_seed, c.sample_count), floor);
}

// Classification -----------------------------------------------------------

/// Decomposition tolerance for a candidate with the given residual. A map at
/// loss L sits O(sqrt(L)) away, in Frobenius norm, from the preserver it
/// approximates. Capped at 1e-3 so that high-residual points stay
/// unclassified.
inline double classification_tolerance(double residual) {
  const double scaled = 100.0 * std::sqrt(std::max(0.0, residual));
  return std::clamp(scaled, kDecomposeTolerance, 1e-3);
}

/// Structural checks attached to every candidate.
inline std::vector<CheckReport> candidate_checks(const Superoperator& t, Index k,
                                                 std::uint64_t seed,
                                                 std::size_t trials = kDefaultTrials) {
  std::vector<CheckReport> out;
  out.push_back(is_trace_preserving(t));
  out.push_back(is_unital(t));
  out.push_back(is_hs_isometry(t));
  out.push_back(unit_circle_spectrum(t));
  out.push_back(is_positive_sampled(t, trials, derive_seed(seed, 11)));
  out.push_back(preserves_rank_k(t, k, trials, derive_seed(seed, 12)));
  return out;
}

/// KnownForm when decompose recognizes a Wigner map (possibly composed with
/// R_k); ConjectureCandidate otherwise.
inline CandidateReport classify_candidate(const Candidate& c, Index k,
                                          double residual_accept = 1e-10) {
  if (!(c.residual < residual_accept))
    throw RejectedCandidate("candidate residual " + std::to_string(c.residual) +
                                " is not below " + std::to_string(residual_accept),
                            c.residual);
  CandidateReport r;
  r.decomposition = decompose(c.map, k, classification_tolerance(c.residual));
  r.verdict = is_wigner_form(r.decomposition) ? CandidateVerdict::KnownForm
                                              : CandidateVerdict::ConjectureCandidate;
  r.checks = candidate_checks(c.map, k, c.sample_seed);
  return r;
}

// Optimization ---------------------------------------------------------------

namespace detail {

struct DescentResult {
  Eigen::MatrixXd t;
  double loss = 0.0;
  std::size_t iterations = 0;
  double min_gap = 0.0;
};

inline constexpr double kConvergedLoss = 1e-14;

/// Fixed step, halved whenever a step fails to decrease the loss.
inline DescentResult descend(Eigen::MatrixXd t, Index n, Index k,
                             const std::vector<Eigen::VectorXd>& coords,
                             const SearchConfig& cfg) {
  Eigen::MatrixXd grad;
  double current = loss_impl(t, n, k, coords, cfg.invertibility_floor, &grad);
  double step = cfg.step_size;
  std::size_t it = 0;
  for (; it < cfg.max_iterations && current >= kConvergedLoss; ++it) {
    const Eigen::MatrixXd trial = t - step * grad;
    const double next = loss_impl(trial, n, k, coords, cfg.invertibility_floor, nullptr);
    if (next < current) {
      t = trial;
      current = loss_impl(t, n, k, coords, cfg.invertibility_floor, &grad);
    } else {
      step *= 0.5;
      if (step < 1e-30) break;
    }
  }
  double gap = 0.0;
  current = loss_impl(t, n, k, coords, cfg.invertibility_floor, nullptr, &gap);
  return {std::move(t), current, it, gap};
}

inline Eigen::MatrixXd initial_point(Index n, Index k, std::size_t restart,
                                     std::uint64_t restart_seed) {
  if (restart == 0) return Eigen::MatrixXd::Identity(n * n, n * n);
  if (restart == 1) return reduction_map(n, k).matrix();
  Rng rng(derive_seed(restart_seed, 2));
  return Eigen::MatrixXd::Identity(n * n, n * n) + 0.5 * gaussian_real(n * n, n * n, rng);
}

}  // namespace detail

inline constexpr double kDegenerateGap = 1e-6;

/// One restart: initialize, descend, and if the sample images end with a
/// top-k eigengap below 1e-6, redraw the samples once and continue.
inline Candidate run_restart(const SearchConfig& cfg, std::size_t restart) {
  const Index k = cfg.k;
  const Index n = 2 * k;
  const std::uint64_t restart_seed = cfg.seed + restart;
  Candidate c;
  c.restart = restart;
  c.sample_seed = derive_seed(restart_seed, 1);
  c.sample_count = cfg.sample_projectors;

  auto coords = detail::sample_coordinates(
      search_samples(n, k, c.sample_seed, c.sample_count));
  auto result = detail::descend(detail::initial_point(n, k, restart, restart_seed), n, k,
                                coords, cfg);
  if (result.min_gap < kDegenerateGap) {
    c.resampled = true;
    c.sample_seed = derive_seed(restart_seed, 3);
    coords = detail::sample_coordinates(
        search_samples(n, k, c.sample_seed, c.sample_count));
    const std::size_t used = result.iterations;
    result = detail::descend(std::move(result.t), n, k, coords, cfg);
    result.iterations += used;
  }
  c.map = Superoperator(n, std::move(result.t));
  c.residual = result.loss;
  c.iterations = result.iterations;
  c.min_sample_gap = result.min_gap;
  c.classification = decompose(c.map, k, classification_tolerance(c.residual));
  c.check_summary = candidate_checks(c.map, k, c.sample_seed);
  return c;
}

/// Runs every restart and returns candidates ordered by residual, then
/// restart index. Restart 0 starts at the identity, restart 1 at R_k, the
/// rest at identity plus Gaussian noise of scale 0.5.
inline std::vector<Candidate> optimize(const SearchConfig& cfg) {
  cfg.validate();
  std::vector<Candidate> out;
  out.reserve(cfg.restarts);
  for (std::size_t r = 0; r < cfg.restarts; ++r) out.push_back(run_restart(cfg, r));
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return a.restart < b.restart;
  });
  return out;
}

/// Low-residual candidates split by what decompose found.
struct SearchSummary {
  std::size_t wigner = 0;
  std::size_t wigner_reduced = 0;
  std::size_t unclassified = 0;
  std::size_t above_accept = 0;
};

inline SearchSummary summarize(const std::vector<Candidate>& cands, double residual_accept) {
  SearchSummary s;
  for (const auto& c : cands) {
    if (!(c.residual < residual_accept)) {
      ++s.above_accept;
      continue;
    }
    if (const auto* d = std::get_if<Decomposed>(&c.classification))
      ++(d->form.reduced ? s.wigner_reduced : s.wigner);
    else
      ++s.unclassified;
  }
  return s;
}

}  // namespace wignerlab
