#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kp {

enum class ErrorKind {
  kInvalidInput,
  kMismatch,
  kUnsupported,
  kDegenerate,
  kNumerical,
  kConstruction,
};

std::string_view to_string(ErrorKind kind);

/// Structured failure raised by every library operation. `field` names the
/// offending input (a JSON key, an index, a parameter) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string field = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

}  // namespace kp
