#include "wignerlab/canonical_maps.hpp"

#include "gtest/gtest.h"

using namespace wignerlab;

namespace {

Eigen::MatrixXcd pauli_y() {
  Eigen::MatrixXcd s(2, 2);
  s << 0, Complex(0, -1), Complex(0, 1), 0;
  return s;
}

// Hermitian matrix of prescribed rank from a random frame.
HermitianMatrix rank_r_hermitian(Index n, Index r, std::uint64_t seed) {
  const Eigen::MatrixXcd f = random_frame(n, r, seed);
  Eigen::VectorXd lambda(r);
  for (Index i = 0; i < r; ++i) lambda(i) = (i % 2 ? -1.0 : 1.0) * (1.0 + i);
  const Eigen::MatrixXcd m = f * lambda.cast<Complex>().asDiagonal() * f.adjoint();
  return HermitianMatrix(0.5 * (m + m.adjoint()));
}

Index numerical_rank(const HermitianMatrix& x) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x.matrix());
  return (svd.singularValues().array() > 1e-8).count();
}

}  // namespace

TEST(transpose_map, negates_antisymmetric_block) {
  const auto t = transpose_map(2);
  const Eigen::VectorXd d = t.matrix().diagonal();
  EXPECT_EQ(d(0), 1.0);
  EXPECT_EQ(d(1), 1.0);
  EXPECT_EQ(d(2), 1.0);
  EXPECT_EQ(d(3), -1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = random_hermitian(4, seed);
    EXPECT_LT(apply(transpose_map(4), x).distance(x.transposed()), 1e-12);
  }
}

TEST(wigner_map, identity_unitary) {
  EXPECT_LT((wigner_map(Eigen::MatrixXcd::Identity(3, 3), false).matrix() - Eigen::MatrixXd::Identity(9, 9)).norm(), 1e-15);
  EXPECT_LT((wigner_map(Eigen::MatrixXcd::Identity(2, 2), true).matrix() - transpose_map(2).matrix()).norm(), 1e-15);
}

TEST(wigner_map, orthogonal_superoperator) {
  for (Index n = 1; n <= 6; ++n)
    for (bool tr : {false, true}) {
      const auto w = wigner_map(haar_unitary(n, 10 * n + tr), tr);
      const Eigen::MatrixXd g = w.matrix().transpose() * w.matrix();
      EXPECT_LT((g - Eigen::MatrixXd::Identity(n * n, n * n)).norm(), 1e-12);
    }
}

TEST(wigner_map, preserves_rank_of_every_hermitian) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Index n = 2 + seed % 5;
    const Index r = 1 + seed % n;
    const auto x = rank_r_hermitian(n, r, seed);
    const auto w = wigner_map(haar_unitary(n, seed + 1000), seed % 2 == 0);
    EXPECT_EQ(numerical_rank(apply(w, x)), r);
  }
}

TEST(wigner_map, non_unitary_reports_deviation) {
  try {
    wigner_map(2.0 * Eigen::MatrixXcd::Identity(2, 2), false);
    FAIL() << "expected NotUnitary";
  } catch (const NotUnitary& e) {
    // ||4I - I||_F on C^2.
    EXPECT_NEAR(e.deviation(), 3.0 * std::sqrt(2.0), 1e-12);
  }
  EXPECT_THROW(wigner_map(Eigen::MatrixXcd::Identity(2, 3), false), DimensionMismatch);
}

TEST(reduction_map, matrix_is_diagonal) {
  const auto r = reduction_map(4, 1);
  Eigen::VectorXd d = -Eigen::VectorXd::Ones(16);
  d(0) = 3.0;
  EXPECT_EQ(r.matrix(), Eigen::MatrixXd(d.asDiagonal()));
}

TEST(reduction_map, complements_projectors_and_negates_traceless) {
  for (Index n = 2; n <= 6; ++n) {
    const auto r = reduction_map(n, 1);
    const auto p = random_projector(n, 1, n);
    const auto out = apply(r, p);
    EXPECT_LT(out.distance(HermitianMatrix::identity(n) - p.matrix()), 1e-12);
    EXPECT_EQ(projector_rank(out), n - 1);

    const auto x = random_hermitian(n, n + 7);
    const auto x0 = x - HermitianMatrix::identity(n) * (x.trace() / double(n));
    EXPECT_LT(apply(reduction_map(n, 1 + n / 3), x0).distance(-x0), 1e-12);
  }
}

TEST(reduction_map, qubit_case_is_pauli_y_transpose) {
  const auto lhs = reduction_map(2, 1);
  const auto rhs = wigner_map(pauli_y(), true);
  EXPECT_LT((lhs.matrix() - rhs.matrix()).norm(), 1e-12);
}

TEST(reduction_map, invalid_rank) {
  EXPECT_THROW(reduction_map(3, 0), InvalidRank);
  EXPECT_THROW(reduction_map(3, 3), InvalidRank);
  EXPECT_THROW(involution_map(0), InvalidRank);
}

TEST(involution_map, squares_to_identity) {
  for (Index k = 1; k <= 5; ++k) {
    const auto r = involution_map(k);
    const Index d = 4 * k * k;
    EXPECT_LT((compose(r, r).matrix() - Eigen::MatrixXd::Identity(d, d)).norm(), 1e-12);
  }
}

TEST(involution_map, rank_one_input) {
  const auto p1 = random_projector(4, 1, 3);
  const auto out = apply(involution_map(2), p1);
  const Eigen::VectorXd ev = out.eigenvalues();
  EXPECT_NEAR(ev(0), 0.5, 1e-12);
  EXPECT_NEAR(ev(1), 0.5, 1e-12);
  EXPECT_NEAR(ev(2), 0.5, 1e-12);
  EXPECT_NEAR(ev(3), -0.5, 1e-12);

  const auto q = random_projector(2, 1, 3);
  EXPECT_EQ(projector_rank(apply(involution_map(1), q)), 1);
}

TEST(breuer_hall_map, rank_one_images_are_scaled_projectors) {
  for (Index h : {2, 3}) {
    const Index n = 2 * h;
    const auto bh = breuer_hall_map(h, random_antisymmetric_unitary(h, 5 + h));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto p = random_projector(n, 1, seed);
      const auto scaled = apply(bh, p) * (2.0 * double(h - 1));
      EXPECT_EQ(projector_rank(scaled, 1e-9), n - 2);
      EXPECT_NEAR(apply(bh, p).trace(), 1.0, 1e-12);
    }
  }
}

TEST(breuer_hall_map, is_singular) {
  const auto bh = breuer_hall_map(2, symplectic_unitary(2));
  EXPECT_LT(smallest_singular_value(bh), 1e-10);
}

TEST(breuer_hall_map, rejects_bad_unitary) {
  EXPECT_THROW(breuer_hall_map(2, Eigen::MatrixXcd::Identity(4, 4)), NotAntisymmetric);
  EXPECT_THROW(breuer_hall_map(2, 2.0 * symplectic_unitary(2)), NotUnitary);
  EXPECT_THROW(breuer_hall_map(1, symplectic_unitary(1)), InvalidDimension);
  EXPECT_THROW(breuer_hall_map(2, symplectic_unitary(3)), DimensionMismatch);
}

TEST(random_antisymmetric_unitary, properties_and_determinism) {
  for (Index h = 1; h <= 4; ++h) {
    const auto u = random_antisymmetric_unitary(h, 42);
    EXPECT_LT(unitarity_deviation(u), 1e-12);
    EXPECT_LT((u + u.transpose()).norm(), 1e-12);
    EXPECT_EQ(u, random_antisymmetric_unitary(h, 42));
  }
}

TEST(standard_block_family, four_two) {
  const auto fam = standard_block_family(4, 2);
  ASSERT_EQ(fam.size(), 2u);
  EXPECT_EQ(fam[0].matrix(), HermitianMatrix::diagonal({1, 1, 0, 0}));
  EXPECT_EQ(fam[1].matrix(), HermitianMatrix::diagonal({0, 0, 1, 1}));
}

TEST(standard_block_family, resolution_of_identity) {
  for (Index n = 1; n <= 8; ++n)
    for (Index k = 1; k <= n; ++k) {
      if (n % k) {
        EXPECT_THROW(standard_block_family(n, k), InvalidRank);
        continue;
      }
      const auto fam = standard_block_family(n, k);
      HermitianMatrix sum = HermitianMatrix::zero(n);
      for (std::size_t i = 0; i < fam.size(); ++i) {
        sum = sum + fam[i].matrix();
        for (std::size_t j = i + 1; j < fam.size(); ++j)
          EXPECT_EQ(hs_inner(fam[i], fam[j]), 0.0);
      }
      EXPECT_EQ(sum, HermitianMatrix::identity(n));
    }
}

TEST(canonical_maps, deterministic_in_seed) {
  EXPECT_EQ(wigner_map(haar_unitary(3, 8), true), wigner_map(haar_unitary(3, 8), true));
  EXPECT_EQ(breuer_hall_map(2, random_antisymmetric_unitary(2, 1)),
            breuer_hall_map(2, random_antisymmetric_unitary(2, 1)));
}
