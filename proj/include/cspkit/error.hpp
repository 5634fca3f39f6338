#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cspkit {

enum class ErrorCode {
  // file format
  BadMagic,
  BadVersion,
  Truncated,
  TrailingData,
  BadLabel,
  NonFinite,
  Io,
  // dataset shape / arguments
  EmptyDataset,
  InconsistentShape,
  InvalidWindow,
  InvalidBand,
  EvenTaps,
  EpochTooShort,
  InvalidArgument,
  DimensionMismatch,
  MissingClass,
  TooFewTrials,
  InvalidCPrime,
  Config,
  // numerics
  EigFailed,
  SingularCovariance,
  NotPositiveDefinite,
  DegenerateFilter,
  MaxIterExceeded,
};

// Coarse grouping used for process exit codes.
enum class ErrorCategory { Config, Data, Numerical };

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::TrailingData: return "TrailingData";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InconsistentShape: return "InconsistentShape";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::EvenTaps: return "EvenTaps";
    case ErrorCode::EpochTooShort: return "EpochTooShort";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::TooFewTrials: return "TooFewTrials";
    case ErrorCode::InvalidCPrime: return "InvalidCPrime";
    case ErrorCode::Config: return "Config";
    case ErrorCode::EigFailed: return "EigFailed";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DegenerateFilter: return "DegenerateFilter";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
  }
  return "Unknown";
}

constexpr ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidCPrime:
    case ErrorCode::InvalidWindow:
    case ErrorCode::InvalidBand:
    case ErrorCode::EvenTaps:
      return ErrorCategory::Config;
    case ErrorCode::EigFailed:
    case ErrorCode::SingularCovariance:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::DegenerateFilter:
    case ErrorCode::MaxIterExceeded:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cspkit
