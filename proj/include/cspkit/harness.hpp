#pragma once

// Experiment protocol: repeated stratified train/test splits, per-split
// cross-validation of the ridge strength, every method x classifier pair,
// and report emission (JSON + CSV).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cspkit/classify.hpp"
#include "cspkit/covariance.hpp"
#include "cspkit/csp.hpp"
#include "cspkit/data.hpp"
#include "cspkit/error.hpp"
#include "cspkit/stiefel.hpp"

namespace cspkit {

enum class Classifier { LDA, MDRM };

constexpr std::string_view to_string(Classifier c) { return c == Classifier::LDA ? "LDA" : "MDRM"; }

inline std::optional<Classifier> classifier_from_string(std::string_view s) {
  std::string up(s);
  for (char& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (up == "LDA") return Classifier::LDA;
  if (up == "MDRM") return Classifier::MDRM;
  return std::nullopt;
}

struct ExperimentConfig {
  std::string dataset_path;
  int c_prime{6};
  std::vector<Method> methods{Method::CSP2, Method::SM, Method::RCSP, Method::RSM};
  std::vector<Classifier> classifiers{Classifier::LDA, Classifier::MDRM};
  int repetitions{30};
  double train_fraction{0.5};
  std::vector<double> lambda_grid{0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  int cv_folds{5};
  std::uint64_t seed{0};
  // Extensions beyond the core protocol; all optional in the config file.
  MdrmSpace mdrm_space{MdrmSpace::Filtered};
  std::optional<std::pair<double, double>> window_s;     // applied first
  std::optional<std::pair<double, double>> bandpass_hz;  // then the FIR band-pass
  int fir_taps{kDefaultFirTaps};
};

inline void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Config, msg); };
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) fail("train_fraction must be in (0, 1)");
  if (cfg.repetitions < 1) fail("repetitions must be >= 1");
  if (cfg.cv_folds < 2) fail("cv_folds must be >= 2");
  if (cfg.c_prime < 2 || cfg.c_prime % 2 != 0) fail("c_prime must be even and >= 2");
  if (cfg.lambda_grid.empty()) fail("lambda_grid must not be empty");
  for (double v : cfg.lambda_grid)
    if (!(v >= 0.0) || !std::isfinite(v)) fail("lambda_grid values must be finite and >= 0");
}

// ---------------------------------------------------------------------------
// Config JSON

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& msg) -> void { throw Error(ErrorCode::Config, msg); };
  if (!j.is_object()) fail("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "dataset_path") {
        cfg.dataset_path = value.get<std::string>();
      } else if (key == "c_prime") {
        cfg.c_prime = value.get<int>();
      } else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& m : value) {
          const auto parsed = method_from_string(m.get<std::string>());
          if (!parsed) fail("unknown method " + m.get<std::string>());
          cfg.methods.push_back(*parsed);
        }
      } else if (key == "classifiers") {
        cfg.classifiers.clear();
        for (const auto& c : value) {
          const auto parsed = classifier_from_string(c.get<std::string>());
          if (!parsed) fail("unknown classifier " + c.get<std::string>());
          cfg.classifiers.push_back(*parsed);
        }
      } else if (key == "repetitions") {
        cfg.repetitions = value.get<int>();
      } else if (key == "train_fraction") {
        cfg.train_fraction = value.get<double>();
      } else if (key == "lambda_grid") {
        cfg.lambda_grid = value.get<std::vector<double>>();
      } else if (key == "cv_folds") {
        cfg.cv_folds = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "mdrm_space") {
        const auto s = value.get<std::string>();
        if (s == "filtered") cfg.mdrm_space = MdrmSpace::Filtered;
        else if (s == "raw") cfg.mdrm_space = MdrmSpace::Raw;
        else fail("mdrm_space must be \"filtered\" or \"raw\"");
      } else if (key == "window_s") {
        const auto v = value.get<std::vector<double>>();
        if (v.size() != 2) fail("window_s must be [start, end]");
        cfg.window_s = std::pair{v[0], v[1]};
      } else if (key == "bandpass_hz") {
        const auto v = value.get<std::vector<double>>();
        if (v.size() != 2) fail("bandpass_hz must be [lo, hi]");
        cfg.bandpass_hz = std::pair{v[0], v[1]};
      } else if (key == "fir_taps") {
        cfg.fir_taps = value.get<int>();
      } else {
        fail("unknown config field \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  validate(cfg);
  return cfg;
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["dataset_path"] = cfg.dataset_path;
  j["c_prime"] = cfg.c_prime;
  j["methods"] = nlohmann::ordered_json::array();
  for (Method m : cfg.methods) j["methods"].push_back(std::string(to_string(m)));
  j["classifiers"] = nlohmann::ordered_json::array();
  for (Classifier c : cfg.classifiers) j["classifiers"].push_back(std::string(to_string(c)));
  j["repetitions"] = cfg.repetitions;
  j["train_fraction"] = cfg.train_fraction;
  j["lambda_grid"] = cfg.lambda_grid;
  j["cv_folds"] = cfg.cv_folds;
  j["seed"] = cfg.seed;
  j["mdrm_space"] = cfg.mdrm_space == MdrmSpace::Raw ? "raw" : "filtered";
  if (cfg.window_s) j["window_s"] = {cfg.window_s->first, cfg.window_s->second};
  if (cfg.bandpass_hz) j["bandpass_hz"] = {cfg.bandpass_hz->first, cfg.bandpass_hz->second};
  j["fir_taps"] = cfg.fir_taps;
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Splits

// Unbiased draw from [0, n) using only raw engine output, so shuffles do not
// depend on the standard library's distribution implementations.
template <class Rng>
std::uint64_t bounded_draw(Rng& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

template <class Rng>
void fisher_yates(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[bounded_draw(rng, i)]);
}

inline std::uint64_t mix_seed(std::uint64_t x) {
  // splitmix64 finaliser
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::vector<std::size_t> indices_with_label(const Dataset& ds, int label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.epochs[i].label == label) out.push_back(i);
  return out;
}

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

inline std::size_t train_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

// Per label: shuffle that label's indices, the first ceil(fraction * N_c)
// go to training.
inline Split stratified_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Split split;
  for (int label = 0; label < 2; ++label) {
    std::vector<std::size_t> idx = indices_with_label(ds, label);
    fisher_yates(idx, rng);
    const std::size_t n_train = std::min(train_count(train_fraction, idx.size()), idx.size());
    split.train.insert(split.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

// Fold id per epoch; each label is shuffled and dealt round-robin.
inline std::vector<int> stratified_folds(const Dataset& ds, int folds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> fold(ds.size(), 0);
  for (int label = 0; label < 2; ++label) {
    std::vector<std::size_t> idx = indices_with_label(ds, label);
    if (idx.size() < static_cast<std::size_t>(folds))
      throw Error(ErrorCode::TooFewTrials, "label " + std::to_string(label) + " has " +
                                               std::to_string(idx.size()) + " trials for " +
                                               std::to_string(folds) + " folds");
    fisher_yates(idx, rng);
    for (std::size_t p = 0; p < idx.size(); ++p) fold[idx[p]] = static_cast<int>(p % folds);
  }
  return fold;
}

// ---------------------------------------------------------------------------
// Bank construction and scoring

inline FilterBank build_bank(Method method, const SpdMatrix& s0, const SpdMatrix& s1, Index c_prime,
                             RegParam reg = {}) {
  switch (method) {
    case Method::CSP1: return csp_approach1(s0, s1, c_prime);
    case Method::CSP2: return csp_approach2(s0, s1, c_prime);
    case Method::RCSP: return rcsp(s0, s1, c_prime, reg);
    case Method::SM: return sm_filters(s0, s1, c_prime);
    case Method::RSM: return rsm_filters(s0, s1, c_prime, reg);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

inline FilterBank fit_bank(const Dataset& ds, Method method, Index c_prime, RegParam reg = {}) {
  const auto [s0, s1] = class_covariances(ds);
  return build_bank(method, s0, s1, c_prime, reg);
}

// Fraction of `test` predicted correctly after fitting on `train`.
inline double evaluate(const FilterBank& bank, Classifier classifier, const Dataset& train,
                       const Dataset& test, MdrmSpace space = MdrmSpace::Filtered) {
  std::size_t correct = 0;
  if (classifier == Classifier::LDA) {
    const LdaModel model = lda_fit(logvar_features(bank, train), labels_of(train));
    for (const Epoch& e : test.epochs) correct += lda_predict(model, logvar_features(bank, e)) == e.label;
  } else {
    const MdrmModel model = mdrm_fit(bank, train, space);
    for (const Epoch& e : test.epochs) correct += mdrm_predict(model, bank, e) == e.label;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

struct CrossvalOptions {
  MdrmSpace mdrm_space{MdrmSpace::Filtered};
};

// Mean validation accuracy per grid value over stratified folds; returns the
// best value, preferring the smaller lambda on ties. A grid value whose fit
// fails numerically in any fold is skipped.
inline RegParam crossval_lambda(const Dataset& train, const std::vector<double>& grid, int folds,
                                Method method, Classifier classifier, Index c_prime,
                                std::uint64_t seed, CrossvalOptions opts = {}) {
  if (!is_regularized(method))
    throw Error(ErrorCode::InvalidArgument, "crossval_lambda needs RCSP or RSM");
  if (grid.empty()) throw Error(ErrorCode::Config, "lambda grid is empty");
  for (double v : grid) (void)RegParam{v};  // validates
  if (grid.size() == 1) return RegParam{grid.front()};
  if (folds < 2) throw Error(ErrorCode::Config, "need at least 2 folds");

  const std::vector<int> fold = stratified_folds(train, folds, seed);
  std::vector<double> score(grid.size(), 0.0);
  std::vector<bool> feasible(grid.size(), true);
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> fit_idx, val_idx;
    for (std::size_t i = 0; i < train.size(); ++i) (fold[i] == f ? val_idx : fit_idx).push_back(i);
    const Dataset fit = train.subset(fit_idx);
    const Dataset val = train.subset(val_idx);
    for (int label = 0; label < 2; ++label)
      if (fit.count(label) < 2)
        throw Error(ErrorCode::TooFewTrials, "fold training part has fewer than 2 trials of label " +
                                                 std::to_string(label));
    const auto [s0, s1] = class_covariances(fit);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!feasible[g]) continue;
      try {
        const FilterBank bank = build_bank(method, s0, s1, c_prime, RegParam{grid[g]});
        score[g] += evaluate(bank, classifier, fit, val, opts.mdrm_space);
      } catch (const Error& e) {
        if (category(e.code()) != ErrorCategory::Numerical) throw;
        feasible[g] = false;
      }
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!feasible[g]) continue;
    if (!best) {
      best = g;
      continue;
    }
    const double diff = score[g] - score[*best];
    if (diff > 1e-12 || (std::abs(diff) <= 1e-12 && grid[g] < grid[*best])) best = g;
  }
  if (!best) throw Error(ErrorCode::SingularCovariance, "every lambda in the grid failed numerically");
  return RegParam{grid[*best]};
}

// ---------------------------------------------------------------------------
// Experiment

struct AccuracySummary {
  Method method{Method::CSP2};
  Classifier classifier{Classifier::LDA};
  std::vector<double> per_repetition;
  double mean{0.0};
  double stddev{0.0};  // sample standard deviation, 0 for one repetition
};

// Objective diagnostics of the training-fit bank, per repetition.
struct MethodSummary {
  Method method{Method::CSP2};
  std::vector<double> ratio1;
  std::vector<double> ratio2;
  std::vector<double> correlation;
  std::vector<double> lambda;  // chosen lambda; empty for unregularized methods
  double ratio1_mean{0.0};
  double ratio2_mean{0.0};
  double correlation_mean{0.0};
};

struct ExperimentReport {
  ExperimentConfig config;
  Index channels{0};
  Index samples{0};
  std::size_t trials0{0};
  std::size_t trials1{0};
  std::vector<AccuracySummary> accuracy;  // methods x classifiers, config order
  std::vector<MethodSummary> methods;     // config order
};

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline Dataset preprocess(const Dataset& ds, const ExperimentConfig& cfg) {
  Dataset out = ds;
  if (cfg.window_s) out = extract_window(out, cfg.window_s->first, cfg.window_s->second);
  if (cfg.bandpass_hz) out = bandpass_fir(out, cfg.bandpass_hz->first, cfg.bandpass_hz->second, cfg.fir_taps);
  return out;
}

// Runs the protocol on an in-memory dataset (already preprocessed).
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& ds) {
  validate(cfg);
  validate(ds);
  check_c_prime(cfg.c_prime, ds.channels());
  for (int label = 0; label < 2; ++label)
    if (ds.count(label) < 4)
      throw Error(ErrorCode::TooFewTrials, "label " + std::to_string(label) + " has " +
                                               std::to_string(ds.count(label)) +
                                               " trials, need at least 4");
  if (ds.length() < ds.channels())
    std::clog << "warning: epochs have fewer samples (" << ds.length() << ") than channels ("
              << ds.channels() << "); covariances will be rank-deficient\n";

  ExperimentReport report;
  report.config = cfg;
  report.channels = ds.channels();
  report.samples = ds.length();
  report.trials0 = ds.count(0);
  report.trials1 = ds.count(1);
  for (Method m : cfg.methods) {
    MethodSummary ms;
    ms.method = m;
    report.methods.push_back(std::move(ms));
    for (Classifier c : cfg.classifiers) {
      AccuracySummary as;
      as.method = m;
      as.classifier = c;
      report.accuracy.push_back(std::move(as));
    }
  }
  const Classifier cv_classifier = cfg.classifiers.empty() ? Classifier::LDA : cfg.classifiers.front();

  for (int r = 0; r < cfg.repetitions; ++r) {
    const std::uint64_t split_seed = cfg.seed ^ static_cast<std::uint64_t>(r);
    const Split split = stratified_split(ds, cfg.train_fraction, split_seed);
    const Dataset train = ds.subset(split.train);
    const Dataset test = ds.subset(split.test);
    for (int label = 0; label < 2; ++label) {
      if (train.count(label) < 2)
        throw Error(ErrorCode::TooFewTrials, "training split has fewer than 2 trials of label " +
                                                 std::to_string(label));
      if (test.count(label) < 1)
        throw Error(ErrorCode::TooFewTrials, "test split has no trials of label " + std::to_string(label));
    }
    const auto [s0, s1] = class_covariances(train);

    std::size_t acc_slot = 0;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const Method method = cfg.methods[mi];
      RegParam reg{};
      if (is_regularized(method)) {
        reg = crossval_lambda(train, cfg.lambda_grid, cfg.cv_folds, method, cv_classifier,
                              cfg.c_prime, mix_seed(split_seed), {cfg.mdrm_space});
        report.methods[mi].lambda.push_back(reg.lambda);
      }
      const FilterBank bank = build_bank(method, s0, s1, cfg.c_prime, reg);
      report.methods[mi].ratio1.push_back(ratio1(bank, s0, s1));
      report.methods[mi].ratio2.push_back(ratio2(bank, s0, s1));
      report.methods[mi].correlation.push_back(column_correlation(bank));
      for (Classifier c : cfg.classifiers)
        report.accuracy[acc_slot++].per_repetition.push_back(
            evaluate(bank, c, train, test, cfg.mdrm_space));
    }
  }

  for (AccuracySummary& a : report.accuracy) {
    a.mean = mean_of(a.per_repetition);
    a.stddev = sample_stddev(a.per_repetition);
  }
  for (MethodSummary& m : report.methods) {
    m.ratio1_mean = mean_of(m.ratio1);
    m.ratio2_mean = mean_of(m.ratio2);
    m.correlation_mean = mean_of(m.correlation);
  }
  return report;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  return run_experiment(cfg, preprocess(read_epo(cfg.dataset_path), cfg));
}

// ---------------------------------------------------------------------------
// Report I/O

inline nlohmann::ordered_json report_to_json(const ExperimentReport& rep) {
  nlohmann::ordered_json j;
  j["config"] = config_to_json(rep.config);
  j["dataset"] = {{"channels", rep.channels},
                  {"samples", rep.samples},
                  {"trials0", rep.trials0},
                  {"trials1", rep.trials1}};
  j["accuracy"] = nlohmann::ordered_json::array();
  for (const AccuracySummary& a : rep.accuracy)
    j["accuracy"].push_back({{"method", std::string(to_string(a.method))},
                             {"classifier", std::string(to_string(a.classifier))},
                             {"mean", a.mean},
                             {"std", a.stddev},
                             {"per_repetition", a.per_repetition}});
  j["methods"] = nlohmann::ordered_json::array();
  for (const MethodSummary& m : rep.methods)
    j["methods"].push_back({{"method", std::string(to_string(m.method))},
                            {"ratio1_mean", m.ratio1_mean},
                            {"ratio2_mean", m.ratio2_mean},
                            {"correlation_mean", m.correlation_mean},
                            {"ratio1", m.ratio1},
                            {"ratio2", m.ratio2},
                            {"correlation", m.correlation},
                            {"lambda", m.lambda}});
  return j;
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
  try {
    ExperimentReport rep;
    rep.config = config_from_json(j.at("config"));
    const auto& d = j.at("dataset");
    rep.channels = d.at("channels").get<Index>();
    rep.samples = d.at("samples").get<Index>();
    rep.trials0 = d.at("trials0").get<std::size_t>();
    rep.trials1 = d.at("trials1").get<std::size_t>();
    for (const auto& a : j.at("accuracy")) {
      AccuracySummary s;
      const auto m = method_from_string(a.at("method").get<std::string>());
      const auto c = classifier_from_string(a.at("classifier").get<std::string>());
      if (!m || !c) throw Error(ErrorCode::Config, "unknown method or classifier in report");
      s.method = *m;
      s.classifier = *c;
      s.mean = a.at("mean").get<double>();
      s.stddev = a.at("std").get<double>();
      s.per_repetition = a.at("per_repetition").get<std::vector<double>>();
      rep.accuracy.push_back(std::move(s));
    }
    for (const auto& mj : j.at("methods")) {
      MethodSummary s;
      const auto m = method_from_string(mj.at("method").get<std::string>());
      if (!m) throw Error(ErrorCode::Config, "unknown method in report");
      s.method = *m;
      s.ratio1_mean = mj.at("ratio1_mean").get<double>();
      s.ratio2_mean = mj.at("ratio2_mean").get<double>();
      s.correlation_mean = mj.at("correlation_mean").get<double>();
      s.ratio1 = mj.at("ratio1").get<std::vector<double>>();
      s.ratio2 = mj.at("ratio2").get<std::vector<double>>();
      s.correlation = mj.at("correlation").get<std::vector<double>>();
      s.lambda = mj.at("lambda").get<std::vector<double>>();
      rep.methods.push_back(std::move(s));
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed report: ") + e.what());
  }
}

inline std::string format_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string accuracy_csv(const ExperimentReport& rep) {
  std::string out = "method,classifier,accuracy_mean,accuracy_std,repetitions\n";
  for (const AccuracySummary& a : rep.accuracy)
    out += std::string(to_string(a.method)) + "," + std::string(to_string(a.classifier)) + "," +
           format_sig6(a.mean) + "," + format_sig6(a.stddev) + "," +
           std::to_string(a.per_repetition.size()) + "\n";
  return out;
}

inline std::string ratios_csv(const ExperimentReport& rep) {
  std::string out = "method,ratio1_mean,ratio2_mean,lambda_mean\n";
  for (const MethodSummary& m : rep.methods)
    out += std::string(to_string(m.method)) + "," + format_sig6(m.ratio1_mean) + "," +
           format_sig6(m.ratio2_mean) + "," + format_sig6(mean_of(m.lambda)) + "\n";
  return out;
}

inline std::string correlations_csv(const ExperimentReport& rep) {
  std::string out = "method,correlation_mean\n";
  for (const MethodSummary& m : rep.methods)
    out += std::string(to_string(m.method)) + "," + format_sig6(m.correlation_mean) + "\n";
  return out;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace detail

inline void render_csv(const ExperimentReport& rep, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  detail::write_text(out_dir / "accuracy.csv", accuracy_csv(rep));
  detail::write_text(out_dir / "ratios.csv", ratios_csv(rep));
  detail::write_text(out_dir / "correlations.csv", correlations_csv(rep));
}

// Writes report.json (full precision) plus accuracy.csv, ratios.csv and
// correlations.csv (6 significant digits).
inline void render_report(const ExperimentReport& rep, const std::filesystem::path& out_dir) {
  render_csv(rep, out_dir);
  detail::write_text(out_dir / "report.json", report_to_json(rep).dump(2) + "\n");
}

inline ExperimentReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("report is not valid JSON: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace cspkit
