#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdi {

enum class ErrorCode {
  MalformedRecord,
  EmptyCorpus,
  IndexOutOfRange,
  InvalidConfig,
  DimensionMismatch,
  ShapeMismatch,
  AllInfinite,
  NoValidPixels,
  DuplicateId,
  ZeroVector,
  NonFinite,
  InsufficientEntries,
  UnknownImage,
  TooSmall,
  InvalidDistribution,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }
  bool is_io() const noexcept { return code_ == ErrorCode::Io; }

 private:
  ErrorCode code_;
};

}  // namespace qdi
