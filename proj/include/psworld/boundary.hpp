#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psworld/classify.hpp"
#include "psworld/model.hpp"
#include "psworld/outcome.hpp"

namespace psworld
{

struct RescopePlan
{
  IdSet new_internal;
  Boundary derived_boundary;
  std::map<InteractionId, std::pair<InteractionClass, InteractionClass>> reclassification;  // changed classes only
};

/// Re-designates the system of interest. The returned model differs from the
/// input only in its boundary. Throws `empty-scope`,
/// `env-cannot-be-internal`, `unknown-entity`, `missing-boundary`.
[[nodiscard]] std::pair<WorldModel, RescopePlan> rescope(const WorldModel & model, const IdSet & new_internal);

struct BoundaryComparison
{
  OutcomeId outcome;
  ContextId context;
  bool truth_before = false;
  bool truth_after = false;
  std::optional<OutcomeClass> class_before;
  std::optional<OutcomeClass> class_after;
  std::string error;  // evaluation failure on either side (e.g. ungrounded outcome)

  [[nodiscard]] bool truth_equal() const noexcept { return truth_before == truth_after; }
  [[nodiscard]] bool classification_changed() const noexcept { return class_before != class_after; }
};

struct BoundaryIndependenceReport
{
  std::vector<BoundaryComparison> rows;
  std::size_t defects = 0;  // truth mismatches: never expected
  std::size_t flips = 0;
};

/// Throws `not-a-rescope` when the models differ in anything but the boundary.
[[nodiscard]] BoundaryIndependenceReport verify_boundary_independence(
  const WorldModel & before, const WorldModel & after, const IdSet & outcomes, const IdSet & contexts);

}  // namespace psworld
