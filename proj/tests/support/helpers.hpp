#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "psworld/dsl.hpp"
#include "psworld/validate.hpp"

namespace psworld::testing
{

/// Parses text that is expected to be syntactically clean.
inline WorldModel model_of(const std::string & text)
{
  auto r = parse_model(text, "test.psw");
  if (!r.ok()) {
    throw std::runtime_error(r.diagnostics.empty() ? "parse failed" : format_diagnostic(r.diagnostics.front()));
  }
  return std::move(*r.model);
}

inline std::set<std::string> rules(const std::vector<Diagnostic> & ds)
{
  std::set<std::string> out;
  for (const auto & d : ds) out.insert(d.rule);
  return out;
}

inline const Diagnostic * find_rule(const std::vector<Diagnostic> & ds, const std::string & rule)
{
  for (const auto & d : ds) {
    if (d.rule == rule) return &d;
  }
  return nullptr;
}

/// Runs `f` and returns the Error code it throws, or "" when it does not.
template <class F>
std::string error_code(F && f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.code();
  }
  return {};
}

}  // namespace psworld::testing
