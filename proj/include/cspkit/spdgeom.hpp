#pragma once

// Symmetric eigendecomposition and SPD matrix geometry: whitening, matrix
// functions, the affine-invariant distance and the Riemannian mean.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cspkit/covariance.hpp"
#include "cspkit/error.hpp"
#include "cspkit/types.hpp"

namespace cspkit {

// Columns of `vectors` are orthonormal eigenvectors; `values` descending.
struct EigenPair {
  Matrix vectors;
  Vector values;
};

// Flip each column so that its largest-magnitude entry is positive. The
// first index wins among equal magnitudes.
inline void canonicalize_signs(Matrix& cols) {
  for (Index j = 0; j < cols.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < cols.rows(); ++i) {
      const double mag = std::abs(cols(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (cols(arg, j) < 0.0) cols.col(j) = -cols.col(j);
  }
}

// Eigendecomposition of a symmetric matrix (only the lower triangle is read).
inline EigenPair sym_eig(const Matrix& s) {
  if (s.rows() != s.cols())
    throw Error(ErrorCode::DimensionMismatch, "sym_eig needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::EigFailed, "symmetric eigensolver did not converge");
  // Descending; exactly equal eigenvalues keep the solver's order, so I maps to I.
  const Index n = s.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });
  EigenPair out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.values(j) = solver.eigenvalues()(order[static_cast<std::size_t>(j)]);
    out.vectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }
  canonicalize_signs(out.vectors);
  return out;
}

inline EigenPair sym_eig(const SpdMatrix& s) { return sym_eig(s.matrix()); }

// P = Lambda^{-1/2} U^T, so that P Sigma P^T = I.
struct WhiteningMatrix {
  Matrix p;
};

inline constexpr double kSingularRatio = 1e-12;

inline WhiteningMatrix whitening(const SpdMatrix& sigma) {
  const EigenPair eig = sym_eig(sigma);
  const double top = eig.values(0);
  const double bottom = eig.values(eig.values.size() - 1);
  if (!(top > 0.0) || !(bottom > kSingularRatio * top))
    throw Error(ErrorCode::SingularCovariance,
                "covariance is rank-deficient (eigenvalues " + std::to_string(top) + " .. " +
                    std::to_string(bottom) + "); regularize it first");
  return {eig.values.cwiseSqrt().cwiseInverse().asDiagonal() * eig.vectors.transpose()};
}

enum class SpdFunction { Sqrt, InvSqrt, Log, Exp };

// U f(Lambda) U^T.
inline SpdMatrix spd_map(const SpdMatrix& s, SpdFunction f) {
  const EigenPair eig = sym_eig(s);
  Vector v = eig.values;
  const double top = std::max(v.maxCoeff(), 0.0);
  for (Index i = 0; i < v.size(); ++i) {
    const double x = v(i);
    switch (f) {
      case SpdFunction::Sqrt:
        if (x < -kPsdTol * top)
          throw Error(ErrorCode::NotPositiveDefinite, "sqrt of eigenvalue " + std::to_string(x));
        v(i) = std::sqrt(std::max(x, 0.0));
        break;
      case SpdFunction::InvSqrt:
        if (!(x > 0.0))
          throw Error(ErrorCode::NotPositiveDefinite, "invsqrt of eigenvalue " + std::to_string(x));
        v(i) = 1.0 / std::sqrt(x);
        break;
      case SpdFunction::Log:
        if (!(x > 0.0))
          throw Error(ErrorCode::NotPositiveDefinite, "log of eigenvalue " + std::to_string(x));
        v(i) = std::log(x);
        break;
      case SpdFunction::Exp:
        v(i) = std::exp(x);
        break;
    }
  }
  return SpdMatrix::trusted(eig.vectors * v.asDiagonal() * eig.vectors.transpose());
}

// Affine-invariant distance ||log(A^{-1/2} B A^{-1/2})||_F.
inline double airm_distance(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "airm_distance dimensions");
  const Matrix w = spd_map(a, SpdFunction::InvSqrt).matrix();
  const Matrix m = w * b.matrix() * w;
  const Vector ev =
      Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly)
          .eigenvalues();
  double sum = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (!(ev(i) > 0.0))
      throw Error(ErrorCode::NotPositiveDefinite, "second argument is not positive definite");
    const double l = std::log(ev(i));
    sum += l * l;
  }
  return std::sqrt(sum);
}

struct MeanResult {
  SpdMatrix mean;
  int iterations{0};
  bool converged{false};
  double tangent_norm{0.0};  // ||(1/N) sum log(M^{-1/2} C_i M^{-1/2})||_F at `mean`
};

// Fixed-point iteration for the Karcher mean under the affine-invariant
// metric, started at the arithmetic mean with unit step. A non-converged
// result is returned with converged=false rather than thrown.
inline MeanResult riemannian_mean(std::span<const SpdMatrix> mats, double tol = 1e-8,
                                  int max_iter = 50) {
  if (mats.empty()) throw Error(ErrorCode::InvalidArgument, "riemannian_mean of empty list");
  const Index n = mats.front().dim();
  Matrix arith = Matrix::Zero(n, n);
  for (const SpdMatrix& c : mats) {
    if (c.dim() != n) throw Error(ErrorCode::DimensionMismatch, "riemannian_mean dimensions");
    arith += c.matrix();
  }
  arith /= static_cast<double>(mats.size());

  MeanResult out;
  out.mean = SpdMatrix::trusted(std::move(arith));
  if (mats.size() == 1) {
    out.mean = mats.front();
    out.converged = true;
    return out;
  }
  for (int iter = 0;; ++iter) {
    const SpdMatrix root = spd_map(out.mean, SpdFunction::Sqrt);
    const Matrix inv_root = spd_map(out.mean, SpdFunction::InvSqrt).matrix();
    Matrix tangent = Matrix::Zero(n, n);
    for (const SpdMatrix& c : mats)
      tangent += spd_map(SpdMatrix::trusted(inv_root * c.matrix() * inv_root), SpdFunction::Log)
                     .matrix();
    tangent /= static_cast<double>(mats.size());
    out.tangent_norm = tangent.norm();
    out.iterations = iter;
    if (out.tangent_norm < tol) {
      out.converged = true;
      return out;
    }
    if (iter == max_iter) return out;
    const Matrix step = spd_map(SpdMatrix::trusted(tangent), SpdFunction::Exp).matrix();
    out.mean = SpdMatrix::trusted(root.matrix() * step * root.matrix());
  }
}

inline MeanResult riemannian_mean(const std::vector<SpdMatrix>& mats, double tol = 1e-8,
                                  int max_iter = 50) {
  return riemannian_mean(std::span<const SpdMatrix>(mats), tol, max_iter);
}

}  // namespace cspkit
