#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "psworld/activation.hpp"
#include "psworld/boundary.hpp"
#include "psworld/classify.hpp"
#include "psworld/outcome.hpp"
#include "psworld/sufficiency.hpp"

namespace psworld
{

/// Outcome x context truth grid with each outcome's classification.
struct OutcomeMatrix
{
  std::vector<OutcomeId> outcomes;
  std::vector<ContextId> contexts;
  std::map<OutcomeId, std::map<ContextId, bool>> truth;
  std::map<OutcomeId, std::string> classification;  // "internal", "external" or the error token
};

[[nodiscard]] OutcomeMatrix outcome_matrix(const WorldModel & model, const IdSet & contexts);

namespace report
{

using nlohmann::ordered_json;

[[nodiscard]] ordered_json to_json(const Diagnostic & d);
[[nodiscard]] ordered_json to_json(const std::vector<Diagnostic> & ds);
[[nodiscard]] ordered_json to_json(const Classification & c);
[[nodiscard]] ordered_json to_json(const ActiveSet & a);
[[nodiscard]] ordered_json to_json(const OutcomeVerdict & v);
[[nodiscard]] ordered_json to_json(const InvarianceResult & r);
[[nodiscard]] ordered_json to_json(const MinimalSetReport & r);
[[nodiscard]] ordered_json to_json(const NonessentialReport & r);
[[nodiscard]] ordered_json to_json(const RescopePlan & p);
[[nodiscard]] ordered_json to_json(const BoundaryIndependenceReport & r);
[[nodiscard]] ordered_json to_json(const SufficiencyReport & r);
[[nodiscard]] ordered_json to_json(const ImpactReport & r);
[[nodiscard]] ordered_json to_json(const std::map<GoalId, GoalStatus> & goals);
[[nodiscard]] ordered_json to_json(const SimulationTrace & t);
[[nodiscard]] ordered_json to_json(const OutcomeMatrix & m);

[[nodiscard]] std::string text(const Classification & c);
[[nodiscard]] std::string text(const ActiveSet & a);
[[nodiscard]] std::string text(const OutcomeVerdict & v);
[[nodiscard]] std::string text(const InvarianceResult & r);
[[nodiscard]] std::string text(const MinimalSetReport & r);
[[nodiscard]] std::string text(const NonessentialReport & r);
[[nodiscard]] std::string text(const RescopePlan & p);
[[nodiscard]] std::string text(const BoundaryIndependenceReport & r);
[[nodiscard]] std::string text(const SufficiencyReport & r);
[[nodiscard]] std::string text(const ImpactReport & r);
[[nodiscard]] std::string text(const std::map<GoalId, GoalStatus> & goals);
[[nodiscard]] std::string text(const SimulationTrace & t);
[[nodiscard]] std::string text(const OutcomeMatrix & m);

[[nodiscard]] std::string braces(const IdSet & ids);

}  // namespace report
}  // namespace psworld
