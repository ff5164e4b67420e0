#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adtof {

enum class ErrorCode {
  MalformedHeader,
  TruncatedFile,
  UnsupportedFormat,
  MissingArtist,
  NoDrumTrack,
  EmptyGameplay,
  BadPitchMap,
  InsufficientAnchors,
  NoBeatsFound,
  BadBeatsFile,
  EmptyAudio,
  BadWav,
  InvalidRange,
  DimensionMismatch,
  BadFeatureFile,
  BadAnnotationFile,
  TooFewArtists,
  InvalidArgument,
  Io,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MissingArtist: return "MissingArtist";
    case ErrorCode::NoDrumTrack: return "NoDrumTrack";
    case ErrorCode::EmptyGameplay: return "EmptyGameplay";
    case ErrorCode::BadPitchMap: return "BadPitchMap";
    case ErrorCode::InsufficientAnchors: return "InsufficientAnchors";
    case ErrorCode::NoBeatsFound: return "NoBeatsFound";
    case ErrorCode::BadBeatsFile: return "BadBeatsFile";
    case ErrorCode::EmptyAudio: return "EmptyAudio";
    case ErrorCode::BadWav: return "BadWav";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadFeatureFile: return "BadFeatureFile";
    case ErrorCode::BadAnnotationFile: return "BadAnnotationFile";
    case ErrorCode::TooFewArtists: return "TooFewArtists";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported as an Error carrying
/// a machine-checkable code plus a human-readable message.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Parse errors that point at a location inside a binary blob.
class ParseError : public Error {
public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& message)
      : Error(code, message + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

}  // namespace adtof
