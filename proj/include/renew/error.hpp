#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace renew {

/// Base class for every error raised by the renewal library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Severity { Error, Warning };

inline const char* to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

struct ParseDiagnostic {
  Severity severity{Severity::Warning};
  int line{1};
  std::string message;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

/// Raised when a board file cannot be turned into a valid Board. Carries the
/// line of the first fatal problem plus any diagnostics gathered before it.
class ParseError : public Error {
public:
  ParseError(int line, const std::string& message, std::vector<ParseDiagnostic> diagnostics = {})
      : Error("line " + std::to_string(line) + ": " + message),
        line_(line),
        message_(message),
        diagnostics_(std::move(diagnostics)) {}

  int line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return message_; }
  const std::vector<ParseDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
  int line_;
  std::string message_;
  std::vector<ParseDiagnostic> diagnostics_;
};

}  // namespace renew
