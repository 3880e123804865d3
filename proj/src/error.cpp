#include "roadhazard/error.hpp"

namespace roadhazard {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidSample: return "InvalidSample";
    case Errc::GravityNotReady: return "GravityNotReady";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::InvalidDepth: return "InvalidDepth";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::BehindCamera: return "BehindCamera";
    case Errc::EndOfStream: return "EndOfStream";
    case Errc::Parse: return "ParseError";
    case Errc::Protocol: return "ProtocolError";
    case Errc::Category: return "CategoryError";
    case Errc::Range: return "RangeError";
    case Errc::Format: return "FormatError";
    case Errc::Order: return "OrderError";
    case Errc::Config: return "ConfigError";
    case Errc::Io: return "IoError";
  }
  return "Unknown";
}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace roadhazard
