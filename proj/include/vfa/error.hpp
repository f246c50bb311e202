#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vfa {

enum class ErrorCode {
  NoGlyph,
  FontLoad,
  Empty,
  TooLong,
  Io,
  Parse,
  GeometryMismatch,
  BadParams,
  OriginMismatch,
  DimMismatch,
  ZeroVector,
  TooSmall,
  LengthMismatch,
  EmptyReference,
  BackendUnavailable,
  Timeout,
  MalformedResponse,
  BadConfig,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Backend failures; the attack engine records these (and unrenderable input)
// as an `incomplete` result instead of propagating.
inline bool is_backend_error(ErrorCode code) {
  return code == ErrorCode::BackendUnavailable || code == ErrorCode::Timeout ||
         code == ErrorCode::MalformedResponse;
}

}  // namespace vfa
