#pragma once

// Classifiers over spatially filtered trials: log-variance features with a
// binary LDA, and minimum distance to Riemannian mean (MDRM).

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "cspkit/covariance.hpp"
#include "cspkit/csp.hpp"
#include "cspkit/data.hpp"
#include "cspkit/error.hpp"
#include "cspkit/spdgeom.hpp"
#include "cspkit/types.hpp"

namespace cspkit {

using FeatureVector = Vector;

// f_j = log(w_j^T X X^T w_j).
inline FeatureVector logvar_features(const FilterBank& bank, const Epoch& epoch) {
  if (bank.channels() != epoch.channels())
    throw Error(ErrorCode::DimensionMismatch, "filter bank has " + std::to_string(bank.channels()) +
                                                  " channels, epoch has " +
                                                  std::to_string(epoch.channels()));
  const Matrix projected = bank.filters.transpose() * epoch.samples;
  FeatureVector f = projected.rowwise().squaredNorm();
  for (Index j = 0; j < f.size(); ++j) {
    if (!(f(j) > 0.0))
      throw Error(ErrorCode::DegenerateFilter, "filtered signal " + std::to_string(j) + " is zero");
    f(j) = std::log(f(j));
  }
  return f;
}

inline std::vector<FeatureVector> logvar_features(const FilterBank& bank, const Dataset& ds) {
  std::vector<FeatureVector> out;
  out.reserve(ds.size());
  for (const Epoch& e : ds.epochs) out.push_back(logvar_features(bank, e));
  return out;
}

inline std::vector<int> labels_of(const Dataset& ds) {
  std::vector<int> out;
  out.reserve(ds.size());
  for (const Epoch& e : ds.epochs) out.push_back(e.label);
  return out;
}

// ---------------------------------------------------------------------------
// LDA

struct LdaModel {
  Vector weight;
  double bias{0.0};
};

inline LdaModel lda_fit(std::span<const FeatureVector> features, std::span<const int> labels) {
  if (features.size() != labels.size())
    throw Error(ErrorCode::DimensionMismatch, "features and labels differ in length");
  if (features.empty()) throw Error(ErrorCode::MissingClass, "no training samples");
  const Index dim = features.front().size();

  Vector mean[2] = {Vector::Zero(dim), Vector::Zero(dim)};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "feature vectors differ in length");
    if (labels[i] != 0 && labels[i] != 1)
      throw Error(ErrorCode::BadLabel, "label " + std::to_string(labels[i]));
    mean[labels[i]] += features[i];
    ++count[labels[i]];
  }
  for (int c = 0; c < 2; ++c) {
    if (count[c] == 0) throw Error(ErrorCode::MissingClass, "no samples with label " + std::to_string(c));
    if (count[c] < 2)
      throw Error(ErrorCode::TooFewTrials, "need at least 2 samples with label " + std::to_string(c));
    mean[c] /= static_cast<double>(count[c]);
  }

  Matrix within = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Vector d = features[i] - mean[labels[i]];
    within.noalias() += d * d.transpose();
  }
  within /= static_cast<double>(features.size() - 2);

  double ridge = 1e-6 * within.trace() / static_cast<double>(dim);
  if (!(ridge > 0.0)) ridge = 1e-12;  // all samples equal to their class mean
  within.diagonal().array() += ridge;

  LdaModel model;
  model.weight = within.ldlt().solve(mean[1] - mean[0]);
  if (!model.weight.allFinite() || model.weight.isZero(0.0))
    throw Error(ErrorCode::DegenerateFilter, "class means coincide; LDA direction undefined");
  model.bias = -model.weight.dot(mean[0] + mean[1]) / 2.0;
  return model;
}

inline LdaModel lda_fit(const std::vector<FeatureVector>& features, const std::vector<int>& labels) {
  return lda_fit(std::span<const FeatureVector>(features), std::span<const int>(labels));
}

inline double lda_score(const LdaModel& model, const FeatureVector& f) {
  if (f.size() != model.weight.size())
    throw Error(ErrorCode::DimensionMismatch, "feature length " + std::to_string(f.size()) +
                                                  ", model expects " +
                                                  std::to_string(model.weight.size()));
  return model.weight.dot(f) + model.bias;
}

// Label 1 when the score is >= 0.
inline int lda_predict(const LdaModel& model, const FeatureVector& f) {
  return lda_score(model, f) >= 0.0 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// MDRM

// Which covariance each trial contributes: C' x C' after spatial filtering,
// or the raw C x C sensor covariance (ignores the filter bank).
enum class MdrmSpace { Filtered, Raw };

struct MdrmModel {
  SpdMatrix mean0;
  SpdMatrix mean1;
  MdrmSpace space{MdrmSpace::Filtered};
};

inline constexpr double kTrialCovRidge = 1e-9;

// Y Y^T / T with Y = W^T X (or X in raw space), plus 1e-9 * trace/dim * I.
inline SpdMatrix trial_covariance(const FilterBank& bank, const Epoch& epoch,
                                  MdrmSpace space = MdrmSpace::Filtered) {
  Matrix cov;
  if (space == MdrmSpace::Raw) {
    cov = epoch.samples * epoch.samples.transpose();
  } else {
    if (bank.channels() != epoch.channels())
      throw Error(ErrorCode::DimensionMismatch, "filter bank and epoch disagree on C");
    const Matrix y = bank.filters.transpose() * epoch.samples;
    cov = y * y.transpose();
  }
  cov /= static_cast<double>(epoch.length());
  cov.diagonal().array() += kTrialCovRidge * cov.trace() / static_cast<double>(cov.rows());
  return SpdMatrix::trusted(std::move(cov));
}

inline MdrmModel mdrm_fit(const FilterBank& bank, const Dataset& ds,
                          MdrmSpace space = MdrmSpace::Filtered) {
  validate(ds);
  std::vector<SpdMatrix> per_class[2];
  for (const Epoch& e : ds.epochs) per_class[e.label].push_back(trial_covariance(bank, e, space));
  for (int c = 0; c < 2; ++c) {
    if (per_class[c].empty())
      throw Error(ErrorCode::MissingClass, "no trials with label " + std::to_string(c));
    if (per_class[c].size() < 2)
      throw Error(ErrorCode::TooFewTrials, "need at least 2 trials with label " + std::to_string(c));
  }
  MdrmModel model;
  model.space = space;
  model.mean0 = riemannian_mean(per_class[0]).mean;
  model.mean1 = riemannian_mean(per_class[1]).mean;
  return model;
}

// Nearest class mean by affine-invariant distance; ties go to label 0.
inline int mdrm_predict(const MdrmModel& model, const SpdMatrix& trial_cov) {
  const double d0 = airm_distance(trial_cov, model.mean0);
  const double d1 = airm_distance(trial_cov, model.mean1);
  return d1 < d0 ? 1 : 0;
}

inline int mdrm_predict(const MdrmModel& model, const FilterBank& bank, const Epoch& epoch) {
  return mdrm_predict(model, trial_covariance(bank, epoch, model.space));
}

}  // namespace cspkit
