#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mqcloc {

enum class ErrorKind {
  size,
  index,
  domain,
  kind,
  shape,
  geometry,
  aliasing,
  degenerate,
  insufficient_data,
  diagnostic,
  config,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a category so the CLI can
/// report it as "<category> error: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mqcloc
