#include "vfa/error.hpp"

namespace vfa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoGlyph: return "NoGlyph";
    case ErrorCode::FontLoad: return "FontLoad";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::TooLong: return "TooLong";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::OriginMismatch: return "OriginMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace vfa
