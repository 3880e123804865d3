#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roadhazard {

enum class Errc {
  InvalidArgument,
  InvalidSample,
  GravityNotReady,
  EmptyWindow,
  InvalidDepth,
  OutOfBounds,
  BehindCamera,
  EndOfStream,
  Parse,
  Protocol,
  Category,
  Range,
  Format,
  Order,
  Config,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above. The C
// API translates them 1:1 into rh_status values.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace roadhazard
