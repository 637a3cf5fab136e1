#pragma once

#include <stdexcept>
#include <string>

namespace irony {

// Error categories map one-to-one onto CLI exit codes (see tools/irony_cli.cpp).
enum class ErrorKind {
  Parse,
  Validation,
  Resource,
  Config,
  Integrity,
  Io,
  TaskMismatch,
  Internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace irony
