#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cspkit/data.hpp"
#include "cspkit/error.hpp"
#include "cspkit/types.hpp"

namespace cspkit {

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

// Symmetric positive semi-definite matrix. The checked constructor verifies
// symmetry and the spectrum (relative tolerance 1e-10); `trusted` only
// symmetrizes and is meant for results the library has just built from
// PSD inputs.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  explicit SpdMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw Error(ErrorCode::DimensionMismatch, "matrix is " + std::to_string(m_.rows()) + "x" +
                                                    std::to_string(m_.cols()));
    if (!m_.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
    const double scale = std::max(m_.cwiseAbs().maxCoeff(), 1e-300);
    if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
      throw Error(ErrorCode::InvalidArgument, "matrix is not symmetric");
    symmetrize();
    if (m_.size() > 0) {
      const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(m_, Eigen::EigenvaluesOnly).eigenvalues();
      if (ev(0) < -kPsdTol * std::max(ev(ev.size() - 1), 0.0))
        throw Error(ErrorCode::NotPositiveDefinite,
                    "matrix has eigenvalue " + std::to_string(ev(0)));
    }
  }

  static SpdMatrix trusted(Matrix m) {
    SpdMatrix s;
    s.m_ = std::move(m);
    s.symmetrize();
    return s;
  }

  static SpdMatrix identity(Index n) { return trusted(Matrix::Identity(n, n)); }

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  void symmetrize() { m_ = (0.5 * (m_ + m_.transpose())).eval(); }

  Matrix m_;
};

// Ridge strength, dimensionless: the added diagonal is lambda * trace(S)/C.
struct RegParam {
  double lambda{0.0};

  RegParam() = default;
  explicit RegParam(double value) : lambda(value) {
    if (!(value >= 0.0) || !std::isfinite(value))
      throw Error(ErrorCode::InvalidArgument, "lambda must be finite and >= 0");
  }
};

// Sigma_c = (1/N_c) sum_i X_i X_i^T over the epochs of each label, with no
// centring or normalisation by T. Accumulation runs in dataset order.
inline std::pair<SpdMatrix, SpdMatrix> class_covariances(const Dataset& ds) {
  validate(ds);
  const Index c = ds.channels();
  Matrix acc[2] = {Matrix::Zero(c, c), Matrix::Zero(c, c)};
  std::size_t counts[2] = {0, 0};
  for (const Epoch& e : ds.epochs) {
    acc[e.label].selfadjointView<Eigen::Lower>().rankUpdate(e.samples);
    ++counts[e.label];
  }
  for (int label = 0; label < 2; ++label) {
    if (counts[label] == 0)
      throw Error(ErrorCode::MissingClass, "no epochs with label " + std::to_string(label));
    acc[label] = acc[label].selfadjointView<Eigen::Lower>();
    acc[label] /= static_cast<double>(counts[label]);
  }
  return {SpdMatrix::trusted(std::move(acc[0])), SpdMatrix::trusted(std::move(acc[1]))};
}

// Sigma + lambda * (trace(Sigma)/C) * I.
inline SpdMatrix regularize(const SpdMatrix& sigma, RegParam reg) {
  if (reg.lambda == 0.0) return sigma;
  const double scale = sigma.matrix().trace() / static_cast<double>(sigma.dim());
  Matrix out = sigma.matrix();
  out.diagonal().array() += reg.lambda * scale;
  return SpdMatrix::trusted(std::move(out));
}

inline SpdMatrix composite(const SpdMatrix& s0, const SpdMatrix& s1) {
  if (s0.dim() != s1.dim())
    throw Error(ErrorCode::DimensionMismatch, "composite of " + std::to_string(s0.dim()) +
                                                  " and " + std::to_string(s1.dim()));
  return SpdMatrix::trusted(s0.matrix() + s1.matrix());
}

}  // namespace cspkit
