#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace psworld
{

/// Location of a construct in a `.psw` source. `line == 0` marks a construct
/// that was built programmatically and has no source text.
struct SourceSpan
{
  std::string file;
  int line = 0;
  int column = 0;
  int length = 0;

  [[nodiscard]] bool known() const noexcept { return line > 0; }

  // Spans are bookkeeping, not model identity.
  friend bool operator==(const SourceSpan &, const SourceSpan &) noexcept { return true; }
};

enum class Severity { Error, Warn };

struct Diagnostic
{
  Severity severity = Severity::Error;
  std::string rule;
  std::string message;
  SourceSpan span;
  std::string principle;  // modeling principle the rule enforces, e.g. "admissibility"
};

[[nodiscard]] std::string to_string(Severity s);

/// `file:line:col: error[rule] message (admissibility)`
[[nodiscard]] std::string format_diagnostic(const Diagnostic & d);

[[nodiscard]] bool has_errors(const std::vector<Diagnostic> & diags) noexcept;

/// Operation failure carrying a stable token (`env-cannot-be-internal`,
/// `search-too-large`, ...) that the CLI and tests key on.
class Error : public std::runtime_error
{
public:
  Error(std::string code, const std::string & message)
  : std::runtime_error(message), code_(std::move(code))
  {
  }

  [[nodiscard]] const std::string & code() const noexcept { return code_; }

private:
  std::string code_;
};

}  // namespace psworld
