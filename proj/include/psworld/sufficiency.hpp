#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psworld/model.hpp"

namespace psworld
{

/// The four constructs a representation must provide per (desired outcome,
/// context) before the outcome's truth is determinable.
enum class Construct { Boundary, Classification, Admissibility, Grounding };

[[nodiscard]] std::string to_string(Construct c);
[[nodiscard]] int construct_number(Construct c) noexcept;  // 1..4

struct ChecklistCell
{
  OutcomeId outcome;
  ContextId context;
  Construct construct = Construct::Boundary;
  bool present = true;
  std::string detail;                 // why the construct is missing
  std::vector<std::string> missing;   // offending ids (interactions, entities)

  friend bool operator==(const ChecklistCell &, const ChecklistCell &) = default;
};

struct SufficiencyReport
{
  bool sufficient = true;
  bool vacuous = false;
  std::vector<ChecklistCell> checklist;             // outcome, context, construct order
  std::map<GoalId, IdSet> goal_support;
  std::map<OutcomeId, std::map<ContextId, bool>> truth;  // filled when sufficient

  [[nodiscard]] const ChecklistCell * cell(const OutcomeId & o, const ContextId & c, Construct k) const;
  [[nodiscard]] std::vector<ChecklistCell> missing_cells() const;
};

/// Never throws on insufficiency; throws `unknown-outcome` / `unknown-context`
/// for undeclared ids.
[[nodiscard]] SufficiencyReport audit_sufficiency(
  const WorldModel & model, const IdSet & desired, const IdSet & contexts);

struct ImpactReport
{
  SufficiencyReport before;
  SufficiencyReport after;
  std::vector<ChecklistCell> deltas;  // cells missing after, not missing before
  std::vector<std::string> actions;   // constructs to add
};

/// `link` lists the goals the new outcome supports. Throws `duplicate-id`
/// when the outcome id already exists.
[[nodiscard]] ImpactReport impact_of_new_outcome(
  const WorldModel & model, const OutcomeDecl & new_outcome, const IdSet & contexts);

struct GoalStatus
{
  bool satisfied = false;
  bool unsupported = false;  // no desired outcome links to the goal
  std::vector<std::pair<OutcomeId, ContextId>> failing;
};

/// Conservative rule: a goal holds when every desired outcome linked to it
/// is TRUE in every context. Throws `insufficient-model`.
[[nodiscard]] std::map<GoalId, GoalStatus> check_goal_satisfaction(
  const WorldModel & model, const IdSet & contexts);

}  // namespace psworld
