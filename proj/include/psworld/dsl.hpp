#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psworld/diagnostic.hpp"
#include "psworld/model.hpp"

namespace psworld
{

struct ParseResult
{
  std::optional<WorldModel> model;  // absent whenever any error was reported
  std::vector<Diagnostic> diagnostics;

  [[nodiscard]] bool ok() const noexcept { return model.has_value(); }
};

/// Parses one `.psw` model. The parser recovers at the next top-level
/// keyword after a malformed block so that one run reports every syntax
/// error. `file` is only used to label spans.
[[nodiscard]] ParseResult parse_model(std::string_view text, const std::string & file = "<input>");

/// Parses a single block (as typed at the REPL) and appends its contents to
/// `model`. Diagnostics are returned; `model` is untouched on error.
[[nodiscard]] std::vector<Diagnostic> parse_block_into(
  WorldModel & model, std::string_view text, const std::string & file = "<repl>");

/// Canonical text: options, entities, interactions, boundary, contexts,
/// stakeholders, outcomes, requirements, each in declaration order.
[[nodiscard]] std::string serialize_model(const WorldModel & model);

}  // namespace psworld
