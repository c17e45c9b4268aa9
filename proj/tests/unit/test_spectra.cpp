#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "ppt/ensembles.hpp"
#include "ppt/errors.hpp"
#include "ppt/spectra.hpp"
#include "support.hpp"

using namespace ppt;

TEST(Bounds, ClosedForms) {
  EXPECT_EQ(theorem1_bound(BipartiteShape(2, 2)), 2);
  EXPECT_EQ(theorem1_bound(BipartiteShape(2, 3)), 3);
  EXPECT_EQ(theorem1_bound(BipartiteShape(3, 2)), 3);
  EXPECT_EQ(theorem1_bound(BipartiteShape(4, 4)), 12);
  EXPECT_EQ(theorem1_bound(BipartiteShape(1, 7)), 0);
  EXPECT_EQ(conjecture_bound(2), 1);
  EXPECT_EQ(conjecture_bound(6), 15);
  EXPECT_THROW(conjecture_bound(0), ArgumentError);
}

TEST(CountNegative, BellProjector) {
  const NegativeSpectrumReport r = count_negative(maximally_entangled(2));
  EXPECT_EQ(r.negative_count, 1);
  EXPECT_NEAR(r.most_negative, -0.5, 1e-12);
  EXPECT_NEAR(r.negativity, 0.5, 1e-12);
  EXPECT_EQ(r.theorem1_bound, 2);
  ASSERT_TRUE(r.conjecture_bound.has_value());
  EXPECT_EQ(*r.conjecture_bound, 1);
}

TEST(CountNegative, MaximallyMixedHasNone) {
  const DensityMatrix rho(HermitianMatrix::identity(6) * (1.0 / 6.0), BipartiteShape(2, 3));
  const NegativeSpectrumReport r = count_negative(rho);
  EXPECT_EQ(r.negative_count, 0);
  EXPECT_EQ(r.most_negative, 0.0);
  EXPECT_FALSE(r.conjecture_bound.has_value());
}

TEST(CountNegative, WitnessSaturatesConjecture) {
  for (int n = 2; n <= 6; ++n) {
    const NegativeSpectrumReport r = count_negative(maximally_entangled(n));
    EXPECT_EQ(r.negative_count, n * (n - 1) / 2);
    for (double x : r.eigenvalues) EXPECT_NEAR(std::abs(x), 1.0 / n, 1e-10);
  }
}

TEST(Census, ToleranceBracketing) {
  RealVector ev(4);
  ev << -5e-11, 0.2, 0.3, 0.5;
  const NegativeSpectrumReport r = census_from_eigenvalues(BipartiteShape(2, 2), ev, 1e-10);
  EXPECT_EQ(r.negative_count, 0);
  EXPECT_EQ(r.negative_count_tight, 1);
  EXPECT_EQ(r.negative_count_loose, 0);
  EXPECT_THROW(census_from_eigenvalues(BipartiteShape(2, 2), ev, 0.0), ArgumentError);
  EXPECT_THROW(census_from_eigenvalues(BipartiteShape(2, 3), ev, 1e-10), ShapeError);
}

TEST(Census, AssertsTheoremOneBound) {
  RealVector ev(4);
  ev << -0.1, -0.1, -0.1, 1.3;
  EXPECT_THROW(census_from_eigenvalues(BipartiteShape(2, 2), ev), TheoremViolation);
}

TEST(CountNegative, AgreesWithOracleOnRandomStates) {
  for (auto [a, b] : {std::pair{2, 2}, {2, 3}, {3, 3}, {2, 4}}) {
    for (std::uint64_t i = 0; i < 40; ++i) {
      const DensityMatrix rho = testing_support::hs_state(a, b, 31, i);
      const std::vector<double> ev = oracle::jacobi_eigenvalues(oracle::partial_transpose_a(rho.matrix().matrix(), a, b));
      int neg = 0;
      double neg_sum = 0.0;
      for (double x : ev) {
        if (x < -1e-10) ++neg;
        if (x < 0) neg_sum -= x;
      }
      const NegativeSpectrumReport r = count_negative(rho);
      EXPECT_EQ(r.negative_count, neg);
      EXPECT_NEAR(r.negativity, neg_sum, 1e-10);
      EXPECT_NEAR(negativity(rho), neg_sum, 1e-10);
      EXPECT_LE(r.negative_count, r.theorem1_bound);
    }
  }
}

TEST(CountNegative, InvariantUnderLocalUnitaries) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const DensityMatrix rho = testing_support::hs_state(2, 3, 41, i);
    const ComplexMatrix u = kron(haar_unitary(2, {42, i}), haar_unitary(3, {43, i}));
    const DensityMatrix moved(rho.matrix().conjugated_by(u), rho.shape());
    const NegativeSpectrumReport r1 = count_negative(rho);
    const NegativeSpectrumReport r2 = count_negative(moved);
    EXPECT_EQ(r1.negative_count, r2.negative_count);
    for (std::size_t k = 0; k < r1.eigenvalues.size(); ++k) EXPECT_NEAR(r1.eigenvalues[k], r2.eigenvalues[k], 1e-9);
  }
}

TEST(AbsPtPt, TwoQubitMinimumNonNegative) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    const DensityMatrix rho = testing_support::hs_state(2, 2, 51, i);
    const AbsPtPt r = abs_pt_pt(rho);
    EXPECT_GE(r.min_eigenvalue, -1e-9);
    EXPECT_NEAR(r.min_eigenvalue, oracle::jacobi_eigenvalues(r.matrix.matrix()).front(), 1e-10);
  }
}

TEST(AbsPtPt, EqualsStateWhenPpt) {
  const DensityMatrix rho = werner_state(0.2);
  const AbsPtPt r = abs_pt_pt(rho);
  EXPECT_LT((r.matrix - rho.matrix()).frobenius_norm(), 1e-12);
}
