#pragma once

#include <stdexcept>
#include <string>

namespace addm {

/// Raised when a caller hands an operation malformed or out-of-contract input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parse failure carrying a 1-based line and column (0 when not applicable).
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(format(what, line, column)), message_(what), line_(line), column_(column) {}

  /// The message without the position prefix.
  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string out;
    if (line != 0) out += "line " + std::to_string(line);
    if (column != 0) out += (out.empty() ? "column " : ", column ") + std::to_string(column);
    if (!out.empty()) out += ": ";
    return out + what;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// Two independently computed quantities disagreed; indicates a bug or an input
/// that slipped past a precondition guard.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace addm
