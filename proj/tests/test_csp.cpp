#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_util.hpp"

using namespace cspkit;

namespace {

SpdMatrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return SpdMatrix::trusted(d.asDiagonal());
}

FilterBank bank_from(const Matrix& w, Method m = Method::CSP2) {
  FilterBank b;
  b.filters = w;
  b.method = m;
  return b;
}

// Textbook Pearson r = cov(x, y) / (sd(x) sd(y)).
double pearson_oracle(const Vector& x, const Vector& y) {
  const double n = static_cast<double>(x.size());
  const double mx = x.sum() / n, my = y.sum() / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (Index i = 0; i < x.size(); ++i) {
    sxy += (x(i) - mx) * (y(i) - my);
    sxx += (x(i) - mx) * (x(i) - mx);
    syy += (y(i) - my) * (y(i) - my);
  }
  return (sxy / (n - 1)) / (std::sqrt(sxx / (n - 1)) * std::sqrt(syy / (n - 1)));
}

}  // namespace

TEST(CspApproach1, DiagonalCase) {
  const FilterBank b = csp_approach1(diag({4.0, 1.0}), diag({1.0, 4.0}), 2);
  EXPECT_EQ(b.method, Method::CSP1);
  EXPECT_NEAR(test::abs_cos(b.filters.col(0), Vector::Unit(2, 0)), 1.0, 1e-12);
  EXPECT_NEAR(test::abs_cos(b.filters.col(1), Vector::Unit(2, 1)), 1.0, 1e-12);
  EXPECT_NEAR(b.values[0], 4.0, 1e-12);
  EXPECT_NEAR(b.values[1], 0.25, 1e-12);
}

TEST(CspApproach1, IdenticalClasses) {
  const WhitenedDecomposition wd = whitened_decomposition(SpdMatrix::identity(2), SpdMatrix::identity(2));
  EXPECT_TRUE(wd.lambda0.isApprox(Vector::Constant(2, 0.5)));
  const FilterBank b = csp_approach1(SpdMatrix::identity(2), SpdMatrix::identity(2), 2);
  EXPECT_NEAR(ratio1(b, SpdMatrix::identity(2), SpdMatrix::identity(2)), 2.0, 1e-12);
}

TEST(CspApproach1, AgreesWithApproach2) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix s0 = test::random_spd(rng, 6), s1 = test::random_spd(rng, 6);
    const FilterBank a = csp_approach1(s0, s1, 4);
    const FilterBank b = csp_approach2(s0, s1, 4);
    for (Index j = 0; j < 4; ++j) {
      EXPECT_GT(test::abs_cos(a.filters.col(j), b.filters.col(j)), 1.0 - 1e-6);
      EXPECT_NEAR(a.values[static_cast<std::size_t>(j)], b.values[static_cast<std::size_t>(j)],
                  1e-8 * std::max(1.0, b.values[static_cast<std::size_t>(j)]));
    }
  }
}

TEST(CspApproach1, Errors) {
  try {
    csp_approach1(SpdMatrix::identity(4), SpdMatrix::identity(4), 3);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidCPrime);
  }
  EXPECT_THROW(csp_approach1(SpdMatrix::identity(4), SpdMatrix::identity(4), 6), Error);
  try {
    csp_approach1(diag({1.0, 0.0}), diag({1.0, 0.0}), 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularCovariance);
  }
}

TEST(CspApproach2, DiagonalCase) {
  const SpdMatrix s0 = diag({4.0, 1.0}), s1 = diag({1.0, 4.0});
  const FilterBank b = csp_approach2(s0, s1, 2);
  EXPECT_NEAR(b.values[0], 4.0, 1e-12);
  EXPECT_NEAR(b.values[1], 0.25, 1e-12);
  EXPECT_TRUE(b.filters.col(0).isApprox(Vector::Unit(2, 0)));
  EXPECT_TRUE(b.filters.col(1).isApprox(Vector::Unit(2, 1)));
  EXPECT_NEAR(ratio1(b, s0, s1), 8.0, 1e-12);
}

TEST(CspApproach2, IdenticalClassesHaveUnitEigenvalues) {
  std::mt19937_64 rng(2);
  const SpdMatrix s = test::random_spd(rng, 5);
  const GeneralizedEigen ge = generalized_eig(s, s);
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(ge.values(i), 1.0, 1e-8);
}

TEST(CspApproach2, ResidualOracle) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix s0 = test::random_spd(rng, 4), s1 = test::random_spd(rng, 4);
    const FilterBank b = csp_approach2(s0, s1, 4);
    for (Index j = 0; j < 4; ++j) {
      const Vector w = b.filters.col(j);
      const double lambda = b.values[static_cast<std::size_t>(j)];
      EXPECT_LT((s0.matrix() * w - lambda * s1.matrix() * w).norm(), 1e-8 * s0.matrix().norm());
      EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    }
    EXPECT_TRUE(std::is_sorted(b.values.rbegin(), b.values.rend()));
  }
}

TEST(Rcsp, ZeroLambdaIsCsp) {
  std::mt19937_64 rng(4);
  const SpdMatrix s0 = test::random_spd(rng, 6), s1 = test::random_spd(rng, 6);
  const FilterBank r = rcsp(s0, s1, 4, RegParam{0.0});
  const FilterBank c = csp_approach2(s0, s1, 4);
  EXPECT_EQ(r.method, Method::RCSP);
  EXPECT_EQ(r.filters, c.filters);
  EXPECT_EQ(r.values, c.values);
}

TEST(Rcsp, DiagonalArithmetic) {
  // s = trace/C = 2.5 for both; regularized denominators diag(3.5, 6.5) and diag(6.5, 3.5).
  const FilterBank r = rcsp(diag({4.0, 1.0}), diag({1.0, 4.0}), 2, RegParam{1.0});
  EXPECT_NEAR(test::abs_cos(r.filters.col(0), Vector::Unit(2, 0)), 1.0, 1e-12);
  EXPECT_NEAR(r.values[0], 4.0 / 3.5, 1e-12);
  EXPECT_NEAR(test::abs_cos(r.filters.col(1), Vector::Unit(2, 1)), 1.0, 1e-12);
  EXPECT_NEAR(r.values[1], 3.5 / 4.0, 1e-12);
}

TEST(Rcsp, LargeLambdaApproachesClassEigenvectors) {
  std::mt19937_64 rng(5);
  const SpdMatrix s0 = test::random_spd(rng, 5), s1 = test::random_spd(rng, 5);
  const FilterBank r = rcsp(s0, s1, 4, RegParam{1e6});
  const EigenPair e0 = sym_eig(s0), e1 = sym_eig(s1);
  EXPECT_GT(test::abs_cos(r.filters.col(0), e0.vectors.col(0)), 1.0 - 1e-6);
  EXPECT_GT(test::abs_cos(r.filters.col(1), e0.vectors.col(1)), 1.0 - 1e-6);
  EXPECT_GT(test::abs_cos(r.filters.col(3), e1.vectors.col(0)), 1.0 - 1e-6);
  EXPECT_GT(test::abs_cos(r.filters.col(2), e1.vectors.col(1)), 1.0 - 1e-6);
}

TEST(Rcsp, HandlesSingularCovarianceWhenRegularized) {
  Matrix s1 = Matrix::Zero(3, 3);
  s1(0, 0) = 1.0;
  s1(1, 1) = 2.0;  // rank 2
  const SpdMatrix a = diag({1.0, 2.0, 3.0});
  EXPECT_THROW(rcsp(a, SpdMatrix::trusted(s1), 2, RegParam{0.0}), Error);
  EXPECT_NO_THROW(rcsp(a, SpdMatrix::trusted(s1), 2, RegParam{0.1}));
}

TEST(Ratio1, Examples) {
  std::mt19937_64 rng(6);
  const SpdMatrix s = test::random_spd(rng, 4);
  const Matrix w = test::gaussian_matrix(rng, 4, 4);
  EXPECT_NEAR(ratio1(bank_from(w), s, s), 4.0, 1e-12);
  EXPECT_NEAR(ratio1(bank_from(Matrix::Identity(2, 2)), diag({4.0, 1.0}), diag({1.0, 4.0})), 8.0, 1e-15);
}

TEST(Ratio1, EigenvalueIdentity) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix s0 = test::random_spd(rng, 6), s1 = test::random_spd(rng, 6);
    const FilterBank b = csp_approach2(s0, s1, 4);
    const double expected = b.values[0] + b.values[1] + 1.0 / b.values[2] + 1.0 / b.values[3];
    EXPECT_NEAR(ratio1(b, s0, s1), expected, 1e-8 * expected);
  }
}

TEST(Ratio1, ZeroVarianceIsDegenerate) {
  try {
    ratio1(bank_from(Matrix::Identity(2, 2)), diag({1.0, 1.0}), diag({0.0, 1.0}));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateFilter);
  }
}

TEST(Ratio2, EqualsRatio1ForTwoFilters) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const SpdMatrix s0 = test::random_spd(rng, 5), s1 = test::random_spd(rng, 5);
    const FilterBank b = bank_from(test::gaussian_matrix(rng, 5, 2));
    EXPECT_EQ(ratio1(b, s0, s1), ratio2(b, s0, s1));
  }
}

TEST(Ratio2, Examples) {
  std::mt19937_64 rng(9);
  const SpdMatrix s = test::random_spd(rng, 4);
  EXPECT_NEAR(ratio2(bank_from(test::gaussian_matrix(rng, 4, 4)), s, s), 2.0, 1e-12);

  // diag(4,1,1) vs diag(1,4,1), W = [e1, e3 | e3, e2]:
  // (4 + 1) / (1 + 1) + (1 + 4) / (1 + 1) = 5
  Matrix w = Matrix::Zero(3, 4);
  w(0, 0) = 1;
  w(2, 1) = 1;
  w(2, 2) = 1;
  w(1, 3) = 1;
  EXPECT_NEAR(ratio2(bank_from(w), diag({4, 1, 1}), diag({1, 4, 1})), 5.0, 1e-15);
  EXPECT_NEAR(ratio1(bank_from(w), diag({4, 1, 1}), diag({1, 4, 1})), 4.0 + 1.0 + 1.0 + 4.0, 1e-15);
}

TEST(Ratios, ColumnScaleInvariance) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    const SpdMatrix s0 = test::random_spd(rng, 6), s1 = test::random_spd(rng, 6);
    FilterBank b = csp_approach2(s0, s1, 4);
    const double r1 = ratio1(b, s0, s1), r2 = ratio2(b, s0, s1);
    // scaling every column keeps both; scaling one column keeps ratio1
    b.filters *= 3.7;
    EXPECT_NEAR(ratio2(b, s0, s1), r2, 1e-12 * r2);
    b.filters.col(1) *= 0.01;
    EXPECT_NEAR(ratio1(b, s0, s1), r1, 1e-12 * r1);
  }
}

TEST(Ratios, ClassSwapReversesHalves) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const SpdMatrix s0 = test::random_spd(rng, 6), s1 = test::random_spd(rng, 6);
    const FilterBank a = csp_approach2(s0, s1, 4);
    const FilterBank b = csp_approach2(s1, s0, 4);
    for (Index j = 0; j < 4; ++j)
      EXPECT_GT(test::abs_cos(a.filters.col(j), b.filters.col(3 - j)), 1.0 - 1e-8);
    EXPECT_NEAR(ratio1(a, s0, s1), ratio1(b, s1, s0), 1e-8 * ratio1(a, s0, s1));
  }
}

TEST(Ratio1, CspIsBestEigenvectorSelection) {
  // Brute force over every split of the pencil eigenvectors into two halves.
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const Index c = 4 + 2 * (rep % 2);  // 4 or 6
    const Index cp = 4;
    const SpdMatrix s0 = test::random_spd(rng, c), s1 = test::random_spd(rng, c);
    const GeneralizedEigen ge = generalized_eig(s0, s1);
    const double best_csp = ratio1(csp_approach2(s0, s1, cp), s0, s1);
    // choose ordered (first-half set, second-half set) of disjoint pairs
    std::vector<int> idx(static_cast<std::size_t>(c));
    std::iota(idx.begin(), idx.end(), 0);
    double best = -1.0;
    for (int a = 0; a < c; ++a)
      for (int b = a + 1; b < c; ++b)
        for (int x = 0; x < c; ++x)
          for (int y = x + 1; y < c; ++y) {
            if (x == a || x == b || y == a || y == b) continue;
            Matrix w(c, 4);
            w << ge.vectors.col(a), ge.vectors.col(b), ge.vectors.col(x), ge.vectors.col(y);
            best = std::max(best, ratio1(bank_from(w), s0, s1));
          }
    EXPECT_GE(best_csp, best - 1e-9 * best);
  }
}

TEST(ColumnCorrelation, Examples) {
  Matrix w(2, 2);
  w << 1, 1, -1, 1;
  w /= std::sqrt(2.0);
  EXPECT_NEAR(column_correlation(bank_from(w)), 0.0, 1e-15);

  std::mt19937_64 rng(13);
  Matrix dup(5, 2);
  dup.col(0) = test::gaussian_matrix(rng, 5, 1);
  dup.col(1) = dup.col(0);
  EXPECT_NEAR(column_correlation(bank_from(dup)), 1.0, 1e-12);
}

TEST(ColumnCorrelation, MatchesTextbookFormula) {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix w = test::gaussian_matrix(rng, 8, 4);
    double sum = 0;
    int pairs = 0;
    for (Index a = 0; a < 4; ++a)
      for (Index b = a + 1; b < 4; ++b, ++pairs) sum += std::abs(pearson_oracle(w.col(a), w.col(b)));
    EXPECT_NEAR(column_correlation(bank_from(w)), sum / pairs, 1e-12);
  }
}

TEST(ColumnCorrelation, ConstantColumnCountsAsZero) {
  Matrix w(3, 3);
  w << 1, 1, 2, 1, 2, 4, 1, 3, 6.5;
  // columns 2 and 3 correlate; column 1 is constant
  const double r23 = std::abs(pearson_oracle(w.col(1), w.col(2)));
  EXPECT_NEAR(column_correlation(bank_from(w)), r23 / 3.0, 1e-12);
}
