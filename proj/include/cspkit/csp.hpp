#pragma once

// Common spatial pattern filters: the whitening route, the generalized
// eigenproblem route, ridge-regularized CSP, the Ratio1/Ratio2 objectives and
// the average column correlation of a filter matrix.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cspkit/covariance.hpp"
#include "cspkit/error.hpp"
#include "cspkit/spdgeom.hpp"
#include "cspkit/types.hpp"

namespace cspkit {

enum class Method { CSP1, CSP2, RCSP, SM, RSM };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::CSP1: return "CSP1";
    case Method::CSP2: return "CSP";
    case Method::RCSP: return "RCSP";
    case Method::SM: return "SM";
    case Method::RSM: return "RSM";
  }
  return "?";
}

// Accepts "CSP" (solved by the generalized eigenproblem), "CSP1", "RCSP",
// "SM", "RSM", case-insensitively.
inline std::optional<Method> method_from_string(std::string_view s) {
  std::string up(s);
  for (char& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (up == "CSP" || up == "CSP2") return Method::CSP2;
  if (up == "CSP1") return Method::CSP1;
  if (up == "RCSP") return Method::RCSP;
  if (up == "SM") return Method::SM;
  if (up == "RSM") return Method::RSM;
  return std::nullopt;
}

constexpr bool is_regularized(Method m) { return m == Method::RCSP || m == Method::RSM; }

// Spatial filters W (C x C'), columns w_1..w_C'. The first C'/2 columns
// favour class 0, the last C'/2 favour class 1, with the most
// discriminative filters at the two ends.
//
// `values` holds the generalized eigenvalues of (Sigma_0, Sigma_1) for CSP
// variants, and the two converged trace ratios (each repeated per column of
// its half) for SM variants.
struct FilterBank {
  Matrix filters;
  Method method{Method::CSP2};
  RegParam reg{};
  std::vector<double> values;

  Index channels() const { return filters.rows(); }
  Index c_prime() const { return filters.cols(); }
  Index half() const { return filters.cols() / 2; }
};

inline void check_c_prime(Index c_prime, Index channels) {
  if (c_prime < 2 || c_prime % 2 != 0 || c_prime > channels)
    throw Error(ErrorCode::InvalidCPrime, "C' must be even with 2 <= C' <= " +
                                              std::to_string(channels) + ", got " +
                                              std::to_string(c_prime));
}

inline void normalize_filter_columns(Matrix& w) {
  for (Index j = 0; j < w.cols(); ++j) {
    const double n = w.col(j).norm();
    if (!(n > 0.0)) throw Error(ErrorCode::DegenerateFilter, "zero filter column");
    w.col(j) /= n;
  }
  canonicalize_signs(w);
}

// Intermediates of the whitening route: Sigma = U Lambda U^T,
// P = Lambda^{-1/2} U^T, S_c = P Sigma_c P^T, S_0 = U0 Lambda0 U0^T and
// lambda1 = diag(U0^T S_1 U0).
struct WhitenedDecomposition {
  Matrix p;
  Matrix s0;
  Matrix s1;
  Matrix u;
  Vector lambda0;
  Vector lambda1;
};

inline WhitenedDecomposition whitened_decomposition(const SpdMatrix& s0, const SpdMatrix& s1) {
  const SpdMatrix sigma = composite(s0, s1);
  WhitenedDecomposition out;
  out.p = whitening(sigma).p;
  out.s0 = out.p * s0.matrix() * out.p.transpose();
  out.s1 = out.p * s1.matrix() * out.p.transpose();
  const EigenPair eig = sym_eig(SpdMatrix::trusted(out.s0));
  out.u = eig.vectors;
  out.lambda0 = eig.values;
  out.lambda1 = (out.u.transpose() * out.s1 * out.u).diagonal();
  return out;
}

// Solutions of a w = lambda b w, lambda descending, unit-norm columns.
// Solved through the symmetric matrix b^{-1/2} a b^{-1/2}.
struct GeneralizedEigen {
  Matrix vectors;
  Vector values;
};

inline GeneralizedEigen generalized_eig(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "pencil dimensions differ");
  const EigenPair beig = sym_eig(b);
  const double top = beig.values(0);
  const double bottom = beig.values(beig.values.size() - 1);
  if (!(top > 0.0) || !(bottom > kSingularRatio * top))
    throw Error(ErrorCode::SingularCovariance,
                "denominator covariance is rank-deficient; regularize it first");
  const Matrix inv_root =
      beig.vectors * beig.values.cwiseSqrt().cwiseInverse().asDiagonal() * beig.vectors.transpose();
  const EigenPair eig = sym_eig(Matrix(inv_root * a.matrix() * inv_root));
  GeneralizedEigen out;
  out.vectors = inv_root * eig.vectors;
  out.values = eig.values;
  normalize_filter_columns(out.vectors);
  return out;
}

namespace detail {

inline FilterBank select_extremes(const Matrix& vectors, const Vector& values, Index c_prime,
                                  Method method, RegParam reg) {
  const Index c = vectors.cols();
  const Index k = c_prime / 2;
  FilterBank bank;
  bank.method = method;
  bank.reg = reg;
  bank.filters.resize(vectors.rows(), c_prime);
  bank.filters.leftCols(k) = vectors.leftCols(k);
  bank.filters.rightCols(k) = vectors.rightCols(k);
  for (Index i = 0; i < k; ++i) bank.values.push_back(values(i));
  for (Index i = c - k; i < c; ++i) bank.values.push_back(values(i));
  return bank;
}

}  // namespace detail

// Whitening route: W = P^T V with V the first and last C'/2 eigenvectors of
// S_0. Columns are rescaled to unit length; stored values are the pencil
// eigenvalues lambda = mu / (1 - mu) recovered from the eigenvalues mu of S_0.
inline FilterBank csp_approach1(const SpdMatrix& s0, const SpdMatrix& s1, Index c_prime) {
  check_c_prime(c_prime, s0.dim());
  const WhitenedDecomposition wd = whitened_decomposition(s0, s1);
  Matrix w = wd.p.transpose() * wd.u;
  normalize_filter_columns(w);
  Vector lambda(wd.lambda0.size());
  for (Index i = 0; i < lambda.size(); ++i) lambda(i) = wd.lambda0(i) / (1.0 - wd.lambda0(i));
  return detail::select_extremes(w, lambda, c_prime, Method::CSP1, RegParam{});
}

// Generalized eigenproblem route: Sigma_0 w = lambda Sigma_1 w.
inline FilterBank csp_approach2(const SpdMatrix& s0, const SpdMatrix& s1, Index c_prime) {
  check_c_prime(c_prime, s0.dim());
  const GeneralizedEigen ge = generalized_eig(s0, s1);
  return detail::select_extremes(ge.vectors, ge.values, c_prime, Method::CSP2, RegParam{});
}

// First half: top eigenvectors of (Sigma_1 + lambda s1 I)^{-1} Sigma_0.
// Last half: top eigenvectors of (Sigma_0 + lambda s0 I)^{-1} Sigma_1, ordered
// so the strongest is last; their stored values are reciprocals, matching
// csp_approach2 at lambda = 0.
inline FilterBank rcsp(const SpdMatrix& s0, const SpdMatrix& s1, Index c_prime, RegParam reg) {
  check_c_prime(c_prime, s0.dim());
  if (reg.lambda == 0.0) {
    FilterBank bank = csp_approach2(s0, s1, c_prime);
    bank.method = Method::RCSP;
    return bank;
  }
  const Index k = c_prime / 2;
  const GeneralizedEigen first = generalized_eig(s0, regularize(s1, reg));
  const GeneralizedEigen second = generalized_eig(s1, regularize(s0, reg));
  FilterBank bank;
  bank.method = Method::RCSP;
  bank.reg = reg;
  bank.filters.resize(s0.dim(), c_prime);
  for (Index i = 0; i < k; ++i) {
    bank.filters.col(i) = first.vectors.col(i);
    bank.values.push_back(first.values(i));
  }
  for (Index i = 0; i < k; ++i) {
    const Index src = k - 1 - i;
    bank.filters.col(k + i) = second.vectors.col(src);
    bank.values.push_back(1.0 / second.values(src));
  }
  return bank;
}

namespace detail {

inline void check_bank(const FilterBank& bank, const SpdMatrix& s0, const SpdMatrix& s1) {
  if (bank.channels() != s0.dim() || bank.channels() != s1.dim())
    throw Error(ErrorCode::DimensionMismatch, "filter bank and covariances disagree on C");
  if (bank.c_prime() < 2 || bank.c_prime() % 2 != 0)
    throw Error(ErrorCode::InvalidCPrime, "filter bank has odd or too few columns");
}

inline double quad(const Matrix& w, Index j, const SpdMatrix& s) {
  return w.col(j).dot(s.matrix() * w.col(j));
}

}  // namespace detail

// Sum of per-filter variance ratios, class 0 over class 1 for the first half
// and class 1 over class 0 for the second.
inline double ratio1(const FilterBank& bank, const SpdMatrix& s0, const SpdMatrix& s1) {
  detail::check_bank(bank, s0, s1);
  const Index k = bank.half();
  double total = 0.0;
  for (Index j = 0; j < bank.c_prime(); ++j) {
    const bool first = j < k;
    const double num = detail::quad(bank.filters, j, first ? s0 : s1);
    const double den = detail::quad(bank.filters, j, first ? s1 : s0);
    if (!(den > 0.0))
      throw Error(ErrorCode::DegenerateFilter, "filter " + std::to_string(j) + " has zero variance");
    total += num / den;
  }
  return total;
}

// Ratio of summed variances within each half, added across halves.
inline double ratio2(const FilterBank& bank, const SpdMatrix& s0, const SpdMatrix& s1) {
  detail::check_bank(bank, s0, s1);
  const Index k = bank.half();
  double num_a = 0.0, den_a = 0.0, num_b = 0.0, den_b = 0.0;
  for (Index j = 0; j < k; ++j) {
    num_a += detail::quad(bank.filters, j, s0);
    den_a += detail::quad(bank.filters, j, s1);
  }
  for (Index j = k; j < bank.c_prime(); ++j) {
    num_b += detail::quad(bank.filters, j, s1);
    den_b += detail::quad(bank.filters, j, s0);
  }
  if (!(den_a > 0.0) || !(den_b > 0.0))
    throw Error(ErrorCode::DegenerateFilter, "a filter half has zero variance");
  return num_a / den_a + num_b / den_b;
}

// Mean |Pearson correlation| over all unordered column pairs, each column
// read as C samples. A constant column correlates 0 with everything.
inline double column_correlation(const FilterBank& bank) {
  const Matrix& w = bank.filters;
  if (w.cols() < 2) throw Error(ErrorCode::InvalidCPrime, "need at least two columns");
  Matrix centred = w.rowwise() - w.colwise().mean();
  Vector norms = centred.colwise().norm();
  bool constant = false;
  for (Index j = 0; j < w.cols(); ++j) {
    if (!(norms(j) > 1e-14 * std::max(w.col(j).cwiseAbs().maxCoeff(), 1e-300))) {
      norms(j) = 0.0;
      constant = true;
    }
  }
  if (constant) std::clog << "column_correlation: constant filter column treated as uncorrelated\n";

  double sum = 0.0;
  Index pairs = 0;
  for (Index a = 0; a < w.cols(); ++a)
    for (Index b = a + 1; b < w.cols(); ++b, ++pairs)
      if (norms(a) > 0.0 && norms(b) > 0.0)
        sum += std::min(1.0, std::abs(centred.col(a).dot(centred.col(b))) / (norms(a) * norms(b)));
  return sum / static_cast<double>(pairs);
}

}  // namespace cspkit
