#include "wignerlab/canonical_maps.hpp"
#include "wignerlab/superop.hpp"

#include "gtest/gtest.h"

using namespace wignerlab;

namespace {

Superoperator random_superop(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return Superoperator(n, gaussian_real(n * n, n * n, rng));
}

Eigen::MatrixXcd pauli_x() {
  Eigen::MatrixXcd s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

}  // namespace

TEST(superoperator, rejects_wrong_shape_and_non_finite) {
  EXPECT_THROW(Superoperator(2, Eigen::MatrixXd::Zero(3, 3)), DimensionMismatch);
  EXPECT_THROW(Superoperator(0, Eigen::MatrixXd::Zero(0, 0)), InvalidDimension);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Superoperator(2, m), PreconditionError);
}

TEST(apply, identity_and_zero) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = random_hermitian(4, seed);
    EXPECT_LT(apply(Superoperator::identity(4), x).distance(x), 1e-12);
    EXPECT_EQ(apply(Superoperator::zero(4), x), HermitianMatrix::zero(4));
  }
}

TEST(apply, pauli_conjugation_swaps_diagonal) {
  const auto sx = pauli_x();
  const auto t = Superoperator::from_function(
      2, [&](const HermitianMatrix& x) { return HermitianMatrix(sx * x.matrix() * sx); });
  const auto out = apply(t, HermitianMatrix::diagonal({1, -1}));
  EXPECT_LT(out.distance(HermitianMatrix::diagonal({-1, 1})), 1e-14);
}

TEST(apply, dimension_mismatch) {
  EXPECT_THROW(apply(Superoperator::identity(3), HermitianMatrix::identity(2)), DimensionMismatch);
}

TEST(compose, acts_as_function_composition) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 1 + seed % 5;
    const auto s = random_superop(n, seed);
    const auto t = random_superop(n, seed + 100);
    const auto x = random_hermitian(n, seed + 200);
    const auto lhs = apply(compose(s, t), x);
    const auto rhs = apply(s, apply(t, x));
    EXPECT_LT(lhs.distance(rhs), 1e-10 * std::max(1.0, rhs.matrix().norm()));
  }
  EXPECT_THROW(compose(Superoperator::identity(2), Superoperator::identity(3)), DimensionMismatch);
}

TEST(dual, adjoint_identity) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index n = 1 + seed % 6;
    const auto t = random_superop(n, seed);
    const auto x = random_hermitian(n, seed + 1);
    const auto y = random_hermitian(n, seed + 2);
    const double a = hs_inner(apply(dual(t), x), y);
    const double b = hs_inner(x, apply(t, y));
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a)));
  }
  EXPECT_EQ(dual(Superoperator::identity(3)), Superoperator::identity(3));
}

TEST(dual, unitary_conjugation_inverts_itself) {
  for (Index n = 1; n <= 6; ++n) {
    const auto w = wigner_map(haar_unitary(n, 50 + n), false);
    const Eigen::MatrixXd prod = compose(dual(w), w).matrix();
    EXPECT_LT((prod - Eigen::MatrixXd::Identity(n * n, n * n)).norm(), 1e-12);
  }
}

TEST(inverse, random_map_round_trip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = random_superop(3, seed);
    const Eigen::MatrixXd prod = compose(inverse(t), t).matrix();
    EXPECT_LT((prod - Eigen::MatrixXd::Identity(9, 9)).norm(), 1e-9);
  }
}

TEST(inverse, singular_map_reports_smallest_singular_value) {
  try {
    inverse(breuer_hall_map(2, symplectic_unitary(2)));
    FAIL() << "expected NotInvertible";
  } catch (const NotInvertible& e) {
    EXPECT_LT(e.smallest_singular_value(), 1e-10);
  }
  EXPECT_THROW(inverse(Superoperator::zero(2)), NotInvertible);
}

TEST(singular_values, descending_and_smallest) {
  const auto t = random_superop(3, 4);
  const Eigen::VectorXd s = singular_values(t);
  for (Index i = 1; i < s.size(); ++i) EXPECT_GE(s(i - 1), s(i));
  EXPECT_EQ(smallest_singular_value(t), s(s.size() - 1));
}

TEST(spectrum, identity_is_all_ones) {
  for (const Complex& z : spectrum(Superoperator::identity(3))) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-14);
}

TEST(spectrum, unitary_conjugation_on_unit_circle) {
  const auto ev = spectrum(wigner_map(haar_unitary(4, 9), false));
  ASSERT_EQ(ev.size(), 16u);
  for (const Complex& z : ev) EXPECT_NEAR(std::abs(z), 1.0, 1e-10);
}

TEST(spectrum, involution_is_one_plus_and_rest_minus) {
  for (Index k = 1; k <= 3; ++k) {
    const auto ev = spectrum(involution_map(k));
    const Index d = 4 * k * k;
    ASSERT_EQ(static_cast<Index>(ev.size()), d);
    EXPECT_NEAR(std::abs(ev[0] - 1.0), 0.0, 1e-12);
    for (Index i = 1; i < d; ++i) EXPECT_NEAR(std::abs(ev[i] + 1.0), 0.0, 1e-12);
  }
}

TEST(choi, identity_matches_direct_construction) {
  for (Index n = 1; n <= 4; ++n) {
    Eigen::MatrixXcd oracle = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) oracle(i * n + i, j * n + j) = 1.0;
    const ChoiMatrix c = choi_of(Superoperator::identity(n));
    EXPECT_LT((c.matrix() - oracle).norm(), 1e-13);
    const Eigen::VectorXd ev = c.eigenvalues();
    EXPECT_NEAR(ev(0), double(n), 1e-12);
    for (Index i = 1; i < ev.size(); ++i) EXPECT_NEAR(ev(i), 0.0, 1e-12);
    EXPECT_NEAR(c.matrix().trace().real(), double(n), 1e-12);
  }
}

TEST(choi, unitary_conjugation_is_vec_outer_product) {
  for (Index n = 2; n <= 4; ++n) {
    const Eigen::MatrixXcd u = haar_unitary(n, 70 + n);
    Eigen::VectorXcd v(n * n);
    for (Index i = 0; i < n; ++i)
      for (Index a = 0; a < n; ++a) v(i * n + a) = u(a, i);
    const ChoiMatrix c = choi_of(wigner_map(u, false));
    EXPECT_LT((c.matrix() - v * v.adjoint()).norm(), 1e-12);
  }
}

TEST(choi, trace_equals_trace_of_identity_image) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Index n = 1 + seed % 4;
    const auto t = random_superop(n, seed);
    EXPECT_NEAR(choi_of(t).matrix().trace().real(), apply(t, HermitianMatrix::identity(n)).trace(), 1e-10);
  }
}

TEST(choi, round_trip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 1 + seed % 5;
    const auto t = random_superop(n, seed);
    const auto back = superop_of_choi(choi_of(t));
    EXPECT_LT((back.matrix() - t.matrix()).norm(), 1e-10 * std::max(1.0, t.matrix().norm()));
  }
}

TEST(choi, rejects_non_hermitian) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 1) = 1.0;
  EXPECT_THROW(ChoiMatrix(2, m), NotHermitian);
  EXPECT_THROW(ChoiMatrix(2, Eigen::MatrixXcd::Zero(3, 3)), DimensionMismatch);
}
