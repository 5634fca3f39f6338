#pragma once

// Epoch/dataset model, EPO1 file I/O, windowing, FIR band-pass and the
// synthetic motor-imagery generator.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cspkit/error.hpp"
#include "cspkit/types.hpp"

namespace cspkit {

// One trial: channels x time samples, with a binary class label.
struct Epoch {
  Matrix samples;
  int label{0};

  Index channels() const { return samples.rows(); }
  Index length() const { return samples.cols(); }
};

struct Dataset {
  std::vector<Epoch> epochs;
  double sample_rate_hz{1.0};

  std::size_t size() const { return epochs.size(); }
  bool empty() const { return epochs.empty(); }
  Index channels() const { return epochs.empty() ? 0 : epochs.front().channels(); }
  Index length() const { return epochs.empty() ? 0 : epochs.front().length(); }

  std::size_t count(int label) const {
    return static_cast<std::size_t>(std::count_if(
        epochs.begin(), epochs.end(), [label](const Epoch& e) { return e.label == label; }));
  }

  // Subset in the given index order.
  Dataset subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.sample_rate_hz = sample_rate_hz;
    out.epochs.reserve(indices.size());
    for (std::size_t i : indices) out.epochs.push_back(epochs.at(i));
    return out;
  }
};

// Throws on an empty dataset, mixed shapes, labels outside {0,1},
// non-finite samples or a non-positive sample rate.
inline void validate(const Dataset& ds) {
  if (ds.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no epochs");
  if (!(ds.sample_rate_hz > 0.0) || !std::isfinite(ds.sample_rate_hz))
    throw Error(ErrorCode::InvalidArgument, "sample rate must be positive and finite");
  const Index c = ds.channels();
  const Index t = ds.length();
  if (c < 1 || t < 1) throw Error(ErrorCode::InconsistentShape, "epochs must be non-empty");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Epoch& e = ds.epochs[i];
    if (e.channels() != c || e.length() != t)
      throw Error(ErrorCode::InconsistentShape,
                  "epoch " + std::to_string(i) + " has shape " + std::to_string(e.channels()) +
                      "x" + std::to_string(e.length()) + ", expected " + std::to_string(c) + "x" +
                      std::to_string(t));
    if (e.label != 0 && e.label != 1)
      throw Error(ErrorCode::BadLabel, "epoch " + std::to_string(i) + " has label " +
                                           std::to_string(e.label));
    if (!e.samples.allFinite())
      throw Error(ErrorCode::NonFinite, "epoch " + std::to_string(i) + " has non-finite samples");
  }
}

// ---------------------------------------------------------------------------
// EPO1
//
//   0  "EPO1"         4  u32 version=1   8  u32 N   12 u32 C   16 u32 T
//   20 f32 fs         24 u8 labels[N]    then f32 samples, epoch/channel/time
//
// All little-endian.

inline constexpr std::size_t kEpoHeaderBytes = 24;

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

inline float get_f32(std::span<const std::uint8_t> in, std::size_t at) {
  return std::bit_cast<float>(get_u32(in, at));
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_epo(const Dataset& ds) {
  validate(ds);
  const auto n = static_cast<std::uint32_t>(ds.size());
  const auto c = static_cast<std::uint32_t>(ds.channels());
  const auto t = static_cast<std::uint32_t>(ds.length());

  std::vector<std::uint8_t> out;
  out.reserve(kEpoHeaderBytes + n + std::size_t{4} * n * c * t);
  out.insert(out.end(), {'E', 'P', 'O', '1'});
  detail::put_u32(out, 1);
  detail::put_u32(out, n);
  detail::put_u32(out, c);
  detail::put_u32(out, t);
  detail::put_f32(out, static_cast<float>(ds.sample_rate_hz));
  for (const Epoch& e : ds.epochs) out.push_back(static_cast<std::uint8_t>(e.label));
  for (const Epoch& e : ds.epochs)
    for (Index ch = 0; ch < e.channels(); ++ch)
      for (Index s = 0; s < e.length(); ++s)
        detail::put_f32(out, static_cast<float>(e.samples(ch, s)));
  return out;
}

inline Dataset decode_epo(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::Truncated, "file shorter than magic");
  if (std::memcmp(bytes.data(), "EPO1", 4) != 0) throw Error(ErrorCode::BadMagic, "expected EPO1");
  if (bytes.size() < kEpoHeaderBytes) throw Error(ErrorCode::Truncated, "header truncated");

  const std::uint32_t version = detail::get_u32(bytes, 4);
  if (version != 1)
    throw Error(ErrorCode::BadVersion, "unsupported version " + std::to_string(version));
  const std::uint64_t n = detail::get_u32(bytes, 8);
  const std::uint64_t c = detail::get_u32(bytes, 12);
  const std::uint64_t t = detail::get_u32(bytes, 16);
  const float fs = detail::get_f32(bytes, 20);
  if (!std::isfinite(fs)) throw Error(ErrorCode::NonFinite, "sample rate is not finite");
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "file declares zero epochs");

  const std::uint64_t expected = kEpoHeaderBytes + n + 4 * n * c * t;
  if (bytes.size() < expected)
    throw Error(ErrorCode::Truncated, "expected " + std::to_string(expected) + " bytes, got " +
                                          std::to_string(bytes.size()));
  if (bytes.size() > expected)
    throw Error(ErrorCode::TrailingData, std::to_string(bytes.size() - expected) +
                                             " bytes after payload");

  Dataset ds;
  ds.sample_rate_hz = fs;
  ds.epochs.resize(n);
  std::size_t at = kEpoHeaderBytes;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint8_t label = bytes[at++];
    if (label > 1)
      throw Error(ErrorCode::BadLabel, "epoch " + std::to_string(i) + " has label byte " +
                                           std::to_string(label));
    ds.epochs[i].label = label;
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    Matrix x(static_cast<Index>(c), static_cast<Index>(t));
    for (Index ch = 0; ch < x.rows(); ++ch)
      for (Index s = 0; s < x.cols(); ++s, at += 4) {
        const float v = detail::get_f32(bytes, at);
        if (!std::isfinite(v))
          throw Error(ErrorCode::NonFinite, "epoch " + std::to_string(i) + " channel " +
                                                std::to_string(ch) + " sample " +
                                                std::to_string(s));
        x(ch, s) = v;
      }
    ds.epochs[i].samples = std::move(x);
  }
  return ds;
}

inline Dataset read_epo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_epo(bytes);
}

inline void write_epo(const Dataset& ds, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode_epo(ds);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

// ---------------------------------------------------------------------------
// Windowing

// Keeps samples [round(t_start*fs), round(t_end*fs)) of every epoch.
inline Dataset extract_window(const Dataset& ds, double t_start_s, double t_end_s) {
  validate(ds);
  if (!(t_start_s >= 0.0) || !(t_start_s < t_end_s))
    throw Error(ErrorCode::InvalidWindow, "need 0 <= start < end");
  const auto first = static_cast<Index>(std::llround(t_start_s * ds.sample_rate_hz));
  const auto last = static_cast<Index>(std::llround(t_end_s * ds.sample_rate_hz));
  if (last > ds.length())
    throw Error(ErrorCode::InvalidWindow, "window ends past the epoch (" + std::to_string(last) +
                                              " > " + std::to_string(ds.length()) + " samples)");
  if (last <= first) throw Error(ErrorCode::InvalidWindow, "window rounds to zero samples");

  Dataset out;
  out.sample_rate_hz = ds.sample_rate_hz;
  out.epochs.reserve(ds.size());
  for (const Epoch& e : ds.epochs)
    out.epochs.push_back({e.samples.middleCols(first, last - first), e.label});
  return out;
}

// ---------------------------------------------------------------------------
// FIR band-pass

inline constexpr int kDefaultFirTaps = 129;

// Hamming-windowed sinc band-pass, unit gain at the band centre.
inline std::vector<double> design_bandpass(double lo_hz, double hi_hz, double fs, int taps) {
  if (taps % 2 == 0) throw Error(ErrorCode::EvenTaps, "taps must be odd, got " + std::to_string(taps));
  if (taps < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 taps");
  if (!(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < fs / 2.0))
    throw Error(ErrorCode::InvalidBand, "need 0 < lo < hi < fs/2");

  const double f_lo = lo_hz / fs;
  const double f_hi = hi_hz / fs;
  const int half = (taps - 1) / 2;
  auto sinc = [](double x) {
    return x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
  };

  // Computed on one half and mirrored so the taps are exactly symmetric.
  std::vector<double> h(static_cast<std::size_t>(taps));
  for (int n = 0; n <= half; ++n) {
    const double m = n - half;
    const double ideal = 2.0 * f_hi * sinc(2.0 * f_hi * m) - 2.0 * f_lo * sinc(2.0 * f_lo * m);
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (taps - 1));
    h[static_cast<std::size_t>(n)] = h[static_cast<std::size_t>(taps - 1 - n)] = ideal * window;
  }

  // Linear phase: magnitude at fc is |sum h[n] cos(2 pi fc (n - half))|.
  const double fc = 0.5 * (f_lo + f_hi);
  double gain = h[static_cast<std::size_t>(half)];
  for (int n = 0; n < half; ++n)
    gain += 2.0 * h[static_cast<std::size_t>(n)] * std::cos(2.0 * std::numbers::pi * fc * (n - half));
  for (double& v : h) v /= gain;
  return h;
}

// Valid-mode convolution per channel; output length T - (taps - 1), which
// also removes the (taps - 1)/2 sample group delay.
inline Dataset bandpass_fir(const Dataset& ds, double lo_hz, double hi_hz,
                            int taps = kDefaultFirTaps) {
  validate(ds);
  const std::vector<double> h = design_bandpass(lo_hz, hi_hz, ds.sample_rate_hz, taps);
  const Index t = ds.length();
  if (t <= taps - 1)
    throw Error(ErrorCode::EpochTooShort, "epoch has " + std::to_string(t) +
                                              " samples, filter needs more than " +
                                              std::to_string(taps - 1));
  const Index out_len = t - (taps - 1);
  const Eigen::Map<const Vector> kernel(h.data(), taps);

  Dataset out;
  out.sample_rate_hz = ds.sample_rate_hz;
  out.epochs.reserve(ds.size());
  for (const Epoch& e : ds.epochs) {
    Matrix y(e.channels(), out_len);
    for (Index ch = 0; ch < e.channels(); ++ch)
      for (Index k = 0; k < out_len; ++k)
        // h is symmetric, so correlation equals convolution.
        y(ch, k) = e.samples.row(ch).segment(k, taps).dot(kernel.transpose());
    out.epochs.push_back({std::move(y), e.label});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic generator

struct SynthParams {
  int channels{8};
  int samples{500};
  int epochs_per_class{100};
  double source_std_high{3.0};
  double source_std_low{1.0};
  double noise_std{0.5};
  double mixing_condition_max{10.0};
  double sample_rate_hz{250.0};
  std::uint64_t seed{0};
};

struct SyntheticData {
  Dataset dataset;
  Matrix mixing;               // A, C x C
  Matrix ground_truth_filters; // unit columns of inv(A)^T for sources 1 and 2
};

namespace detail {

inline double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

inline constexpr int kMixingAttempts = 1000;

// Gaussian mixing matrix with condition number <= kappa. kappa == 1 yields
// the identity. If rejection sampling does not succeed within the attempt
// cap (large C with small kappa), the last draw's singular values are
// compressed geometrically onto [s_max / kappa, s_max].
template <class Rng>
Matrix draw_mixing(int c, double kappa, Rng& rng) {
  if (kappa == 1.0) return Matrix::Identity(c, c);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(c, c);
  for (int attempt = 0; attempt < kMixingAttempts; ++attempt) {
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i) a(i, j) = gauss(rng);
    if (condition_number(a) <= kappa) return a;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector s = svd.singularValues();
  const double top = s(0);
  const double alpha = std::log(kappa) / std::log(top / s(s.size() - 1));
  for (Index i = 0; i < s.size(); ++i) s(i) = top * std::pow(s(i) / top, alpha);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace detail

inline void validate(const SynthParams& p) {
  if (p.channels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 channels");
  if (p.samples < 1 || p.epochs_per_class < 1)
    throw Error(ErrorCode::InvalidArgument, "samples and epochs_per_class must be positive");
  // std_high == std_low is allowed: it yields a null model with no class difference.
  if (!(p.source_std_high >= p.source_std_low && p.source_std_low > 0.0))
    throw Error(ErrorCode::InvalidArgument, "need std_high >= std_low > 0");
  if (!(p.noise_std >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise std must be >= 0");
  if (!(p.mixing_condition_max >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "mixing condition bound must be >= 1");
  if (!(p.sample_rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample rate must be > 0");
}

// X = A S + noise * E. Source 1 is strong in class 0, source 2 is strong in
// class 1, every other source is weak in both. Epochs alternate class 0, 1.
inline SyntheticData generate_synthetic(const SynthParams& p) {
  validate(p);

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int c = p.channels;
  const int t = p.samples;

  SyntheticData out;
  out.mixing = detail::draw_mixing(c, p.mixing_condition_max, rng);
  const Matrix unmix_t = out.mixing.inverse().transpose();
  out.ground_truth_filters = unmix_t.leftCols(2);
  out.ground_truth_filters.colwise().normalize();

  out.dataset.sample_rate_hz = p.sample_rate_hz;
  out.dataset.epochs.reserve(static_cast<std::size_t>(2 * p.epochs_per_class));
  Matrix sources(c, t);
  Matrix noise(c, t);
  for (int i = 0; i < p.epochs_per_class; ++i) {
    for (int label = 0; label < 2; ++label) {
      for (Index r = 0; r < c; ++r) {
        double std_dev = p.source_std_low;
        if ((r == 0 && label == 0) || (r == 1 && label == 1)) std_dev = p.source_std_high;
        for (Index s = 0; s < t; ++s) sources(r, s) = std_dev * gauss(rng);
      }
      for (Index r = 0; r < c; ++r)
        for (Index s = 0; s < t; ++s) noise(r, s) = gauss(rng);
      out.dataset.epochs.push_back({out.mixing * sources + p.noise_std * noise, label});
    }
  }
  return out;
}

}  // namespace cspkit
