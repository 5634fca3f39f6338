#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"

using namespace cspkit;

namespace {

SpdMatrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return SpdMatrix::trusted(d.asDiagonal());
}

double det_oracle(const Matrix& m) {
  // cofactor expansion, fine for n <= 4
  const Index n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (Index j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (Index r = 1; r < n; ++r)
      for (Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    det += ((j % 2) ? -1.0 : 1.0) * m(0, j) * det_oracle(minor);
  }
  return det;
}

}  // namespace

TEST(SymEig, DiagonalExample) {
  const EigenPair e = sym_eig(diag({1.0, 4.0}));
  EXPECT_DOUBLE_EQ(e.values(0), 4.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  EXPECT_TRUE(e.vectors.col(0).isApprox(Vector::Unit(2, 1)));
  EXPECT_TRUE(e.vectors.col(1).isApprox(Vector::Unit(2, 0)));
}

TEST(SymEig, DegenerateIdentity) {
  const EigenPair e = sym_eig(SpdMatrix::identity(3));
  EXPECT_TRUE(e.values.isApprox(Vector::Ones(3)));
  EXPECT_TRUE((e.vectors.transpose() * e.vectors).isIdentity(1e-12));
  for (Index j = 0; j < 3; ++j) {
    Index arg;
    e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(e.vectors(arg, j), 0.0);
  }
}

TEST(SymEig, TwoByTwoClosedForm) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix m = test::random_spd(rng, 2).matrix();
    const double a = m(0, 0), b = m(0, 1), d = m(1, 1);
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    const EigenPair e = sym_eig(SpdMatrix::trusted(m));
    EXPECT_NEAR(e.values(0), mid + rad, 1e-12 * (mid + rad));
    EXPECT_NEAR(e.values(1), mid - rad, 1e-12 * (mid + rad));
  }
}

TEST(SymEig, ReconstructionOrthonormalitySignAndTraceDet) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const Index n = 2 + rep % 4;  // 2..5
    const SpdMatrix s = test::random_spd(rng, n);
    const EigenPair e = sym_eig(s);
    EXPECT_TRUE((e.vectors.transpose() * e.vectors).isIdentity(1e-9));
    const Matrix rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((rec - s.matrix()).norm() / s.matrix().norm(), 1e-10);
    for (Index i = 1; i < n; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
    for (Index j = 0; j < n; ++j) {
      Index arg;
      e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(e.vectors(arg, j), 0.0);
    }
    EXPECT_NEAR(e.values.sum(), s.matrix().trace(), 1e-9 * s.matrix().trace());
    if (n <= 4) {
      const double det = det_oracle(s.matrix());
      EXPECT_NEAR(e.values.prod(), det, 1e-9 * std::abs(det));
    }
  }
}

TEST(Whitening, Examples) {
  EXPECT_TRUE(whitening(SpdMatrix::identity(3)).p.isApprox(Matrix::Identity(3, 3)));

  const Matrix p = whitening(diag({4.0, 1.0})).p;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  expected(1, 1) = 1.0;
  EXPECT_TRUE(p.isApprox(expected));
}

TEST(Whitening, WhitensRandomSpd) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix s = test::random_spd(rng, 6);
    const Matrix p = whitening(s).p;
    EXPECT_LT((p * s.matrix() * p.transpose() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Whitening, CompositeWhitensBothClasses) {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix s0 = test::random_spd(rng, 5), s1 = test::random_spd(rng, 5);
    const Matrix p = whitening(composite(s0, s1)).p;
    const Matrix w0 = p * s0.matrix() * p.transpose();
    const Matrix w1 = p * s1.matrix() * p.transpose();
    EXPECT_LT((w0 + w1 - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-8);
    // shared eigenvectors: U^T S1 U is diagonal with 1 - lambda0
    const EigenPair e0 = sym_eig(SpdMatrix::trusted(w0));
    const Matrix d1 = e0.vectors.transpose() * w1 * e0.vectors;
    EXPECT_LT((d1 - Matrix((Vector::Ones(5) - e0.values).asDiagonal())).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Whitening, SingularCovariance) {
  try {
    whitening(diag({1.0, 0.0}));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularCovariance);
    EXPECT_NE(std::string(e.what()).find("regularize"), std::string::npos);
  }
}

TEST(SpdMap, Examples) {
  EXPECT_TRUE(spd_map(diag({4.0, 9.0}), SpdFunction::Sqrt).matrix().isApprox(diag({2.0, 3.0}).matrix()));

  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const SpdMatrix s = test::random_spd(rng, 4);
    const Matrix round = spd_map(spd_map(s, SpdFunction::Log), SpdFunction::Exp).matrix();
    EXPECT_LT((round - s.matrix()).cwiseAbs().maxCoeff(), 1e-9);
    const Matrix w = spd_map(s, SpdFunction::InvSqrt).matrix();
    EXPECT_LT((w * s.matrix() * w - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-9);
    const Matrix r = spd_map(s, SpdFunction::Sqrt).matrix();
    EXPECT_LT((r * r - s.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SpdMap, NotPositiveDefinite) {
  for (SpdFunction f : {SpdFunction::Log, SpdFunction::InvSqrt}) {
    try {
      spd_map(diag({1.0, 0.0}), f);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    }
  }
}

TEST(Airm, Examples) {
  std::mt19937_64 rng(8);
  const SpdMatrix a = test::random_spd(rng, 3);
  EXPECT_NEAR(airm_distance(a, a), 0.0, 1e-12);
  EXPECT_NEAR(airm_distance(SpdMatrix::identity(2), diag({std::exp(2.0), 1.0})), 2.0, 1e-12);
}

TEST(Airm, AffineInvarianceSymmetryInversion) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix a = test::random_spd(rng, 4), b = test::random_spd(rng, 4);
    const Matrix m = test::gaussian_matrix(rng, 4, 4);
    const double d = airm_distance(a, b);
    const SpdMatrix ma = SpdMatrix::trusted(m * a.matrix() * m.transpose());
    const SpdMatrix mb = SpdMatrix::trusted(m * b.matrix() * m.transpose());
    EXPECT_NEAR(airm_distance(ma, mb), d, 1e-8);
    EXPECT_NEAR(airm_distance(b, a), d, 1e-8);
    const SpdMatrix ai = SpdMatrix::trusted(a.matrix().inverse());
    const SpdMatrix bi = SpdMatrix::trusted(b.matrix().inverse());
    EXPECT_NEAR(airm_distance(ai, bi), d, 1e-8);
  }
}

TEST(RiemannianMean, Examples) {
  std::mt19937_64 rng(10);
  const SpdMatrix a = test::random_spd(rng, 3);
  EXPECT_EQ(riemannian_mean(std::vector<SpdMatrix>{a}).mean.matrix(), a.matrix());

  const MeanResult r = riemannian_mean(std::vector<SpdMatrix>{diag({1.0, 1.0}), diag({4.0, 4.0})});
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.mean.matrix() - 2.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(RiemannianMean, StationaryAndOrderIndependent) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<SpdMatrix> mats;
    for (int i = 0; i < 5; ++i) mats.push_back(test::random_spd(rng, 3));
    const MeanResult r = riemannian_mean(mats);
    ASSERT_TRUE(r.converged);
    // gradient oracle: recompute the tangent mean at the returned point
    const Matrix w = spd_map(r.mean, SpdFunction::InvSqrt).matrix();
    Matrix g = Matrix::Zero(3, 3);
    for (const SpdMatrix& c : mats)
      g += spd_map(SpdMatrix::trusted(w * c.matrix() * w), SpdFunction::Log).matrix();
    EXPECT_LT((g / 5.0).norm(), 1e-8);

    std::vector<SpdMatrix> permuted(mats.rbegin(), mats.rend());
    std::swap(permuted[0], permuted[2]);
    const MeanResult q = riemannian_mean(permuted);
    EXPECT_LT((q.mean.matrix() - r.mean.matrix()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(RiemannianMean, IterationCapReportsNotConverged) {
  std::mt19937_64 rng(12);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 4; ++i) mats.push_back(test::random_spd(rng, 3));
  const MeanResult r = riemannian_mean(mats, 1e-30, 2);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
}
