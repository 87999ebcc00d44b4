#pragma once

#include <stdexcept>
#include <string>

namespace deckit {

enum class ErrorKind {
  undeclared_name,
  type_mismatch,
  syntax_error,
  duplicate_name,
  unknown_profile,
  formation,
  carrier_too_large,
  incomplete_const_table,
  illegal_lift,
  not_a_propagator,
  decoration_mismatch,
  empty_handler_list,
  unknown_rule,
  unsupported,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. The kind decides the CLI exit code:
/// `carrier_too_large` is a resource error, everything else a user error.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace deckit
