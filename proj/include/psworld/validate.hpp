#pragma once

#include <vector>

#include "psworld/diagnostic.hpp"
#include "psworld/model.hpp"

namespace psworld
{

/// Lists every violated well-formedness rule. An empty result means the
/// model is well-formed; warnings alone do not make it ill-formed.
[[nodiscard]] std::vector<Diagnostic> validate_model(const WorldModel & model);

/// Namespace-uniqueness pass shared by the parser and the validator.
[[nodiscard]] std::vector<Diagnostic> check_duplicate_ids(const WorldModel & model);

}  // namespace psworld
