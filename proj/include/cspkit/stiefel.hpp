#pragma once

// Trace-ratio maximisation over matrices with orthonormal columns, and the
// SM / RSM filter banks built from it.

#include <iostream>
#include <string>
#include <vector>

#include "cspkit/covariance.hpp"
#include "cspkit/csp.hpp"
#include "cspkit/error.hpp"
#include "cspkit/spdgeom.hpp"
#include "cspkit/types.hpp"

namespace cspkit {

struct TraceRatioResult {
  Matrix frame;  // C x k, orthonormal columns
  double rho{0.0};
  int iterations{0};
  bool converged{false};
  // Ratio of the warm start followed by the ratio produced by every
  // iteration, before any acceptance test.
  std::vector<double> rho_history;
};

inline double trace_ratio(const Matrix& frame, const SpdMatrix& a, const SpdMatrix& b) {
  return (frame.transpose() * a.matrix() * frame).trace() /
         (frame.transpose() * b.matrix() * frame).trace();
}

// Maximises trace(V^T A V) / trace(V^T B V) subject to V^T V = I_k.
//
// Warm start: the orthonormalised top-k eigenvectors of the pencil (A, B).
// Each step takes V as the top-k eigenvectors of A - rho B and recomputes
// rho; since trace(V^T (A - rho B) V) >= 0 for the new V, rho never
// decreases. Stops when rho gains less than `tol`.
inline TraceRatioResult trace_ratio_max(const SpdMatrix& a, const SpdMatrix& b, Index k,
                                        double tol = 1e-10, int max_iter = 100) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "trace ratio dimensions");
  if (k < 1 || k > a.dim())
    throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= C, got k=" + std::to_string(k));
  {
    const Vector bev = sym_eig(b).values;
    if (!(bev(bev.size() - 1) > kSingularRatio * bev(0)) || !(bev(0) > 0.0))
      throw Error(ErrorCode::NotPositiveDefinite, "trace ratio denominator is not positive definite");
  }

  const GeneralizedEigen pencil = generalized_eig(a, b);
  Matrix frame = Eigen::HouseholderQR<Matrix>(pencil.vectors.leftCols(k))
                     .householderQ() *
                 Matrix::Identity(a.dim(), k);
  canonicalize_signs(frame);

  TraceRatioResult out;
  out.rho = trace_ratio(frame, a, b);
  out.rho_history.push_back(out.rho);
  for (int iter = 1; iter <= max_iter; ++iter) {
    const EigenPair eig = sym_eig(Matrix(a.matrix() - out.rho * b.matrix()));
    Matrix candidate = eig.vectors.leftCols(k);
    const double rho = trace_ratio(candidate, a, b);
    out.rho_history.push_back(rho);
    out.iterations = iter;
    const double gain = rho - out.rho;
    if (gain >= 0.0) {
      frame = std::move(candidate);
      out.rho = rho;
    }
    if (gain < tol) {
      out.converged = true;
      break;
    }
  }
  out.frame = std::move(frame);
  return out;
}

namespace detail {

inline FilterBank stack_halves(const TraceRatioResult& first, const TraceRatioResult& second,
                               Method method, RegParam reg) {
  const Index k = first.frame.cols();
  for (const TraceRatioResult* r : {&first, &second})
    if (!r->converged)
      std::clog << "warning: trace-ratio iteration hit its cap (rho=" << r->rho << ")\n";
  FilterBank bank;
  bank.method = method;
  bank.reg = reg;
  bank.filters.resize(first.frame.rows(), 2 * k);
  bank.filters.leftCols(k) = first.frame;
  // Strongest class-1 filter last, as for CSP.
  bank.filters.rightCols(k) = second.frame.rowwise().reverse();
  bank.values.assign(static_cast<std::size_t>(k), first.rho);
  bank.values.insert(bank.values.end(), static_cast<std::size_t>(k), second.rho);
  return bank;
}

}  // namespace detail

inline FilterBank sm_filters(const SpdMatrix& s0, const SpdMatrix& s1, Index c_prime) {
  check_c_prime(c_prime, s0.dim());
  const Index k = c_prime / 2;
  return detail::stack_halves(trace_ratio_max(s0, s1, k), trace_ratio_max(s1, s0, k), Method::SM,
                              RegParam{});
}

// Denominator covariances carry the lambda * trace/C ridge.
inline FilterBank rsm_filters(const SpdMatrix& s0, const SpdMatrix& s1, Index c_prime,
                              RegParam reg) {
  check_c_prime(c_prime, s0.dim());
  const Index k = c_prime / 2;
  return detail::stack_halves(trace_ratio_max(s0, regularize(s1, reg), k),
                              trace_ratio_max(s1, regularize(s0, reg), k), Method::RSM, reg);
}

}  // namespace cspkit
