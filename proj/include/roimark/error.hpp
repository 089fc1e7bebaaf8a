#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roimark {

enum class ErrorCode {
  RoiOutOfBounds,
  RoiNotTileable,
  ImageTooSmall,
  IndexOutOfRange,
  CorruptStream,
  EmptyKey,
  BadVersion,
  HeaderInvalid,
  FieldOverflow,
  KeyInvalid,
  InsufficientRoni,
  NonAsciiEpr,
  CapacityExceeded,
  NotAuthentic,
  DimensionMismatch,
  TooSmall,
  OutOfBounds,
  FormatError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RoiOutOfBounds: return "RoiOutOfBounds";
    case ErrorCode::RoiNotTileable: return "RoiNotTileable";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::CorruptStream: return "CorruptStream";
    case ErrorCode::EmptyKey: return "EmptyKey";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::HeaderInvalid: return "HeaderInvalid";
    case ErrorCode::FieldOverflow: return "FieldOverflow";
    case ErrorCode::KeyInvalid: return "KeyInvalid";
    case ErrorCode::InsufficientRoni: return "InsufficientRoni";
    case ErrorCode::NonAsciiEpr: return "NonAsciiEpr";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::NotAuthentic: return "NotAuthentic";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace roimark
