#include "kp/error.hpp"

#include <utility>

namespace kp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kMismatch: return "mismatch";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kConstruction: return "construction";
  }
  return "unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message, const std::string& field) {
  std::string out(to_string(kind));
  if (!field.empty()) {
    out += " [" + field + "]";
  }
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, std::string field)
    : std::runtime_error(compose(kind, message, field)), kind_(kind), field_(std::move(field)) {}

}  // namespace kp
