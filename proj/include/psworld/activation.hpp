#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "psworld/diagnostic.hpp"
#include "psworld/model.hpp"

namespace psworld
{

enum class Rule { Seed, Fire, Relay };

[[nodiscard]] std::string to_string(Rule r);

/// How one interaction became active. Premises are interactions that were
/// active earlier in the closure.
struct Activation
{
  Rule rule = Rule::Seed;
  EntityId entity;        // emitter (seed), firing entity, or relaying ES
  std::string function;   // firing function; empty for seed/relay
  std::vector<InteractionId> premises;
  int layer = 0;          // 0 for seeds, 1 + max(premise layers) otherwise
};

struct ActiveSet
{
  ContextId context;
  IdSet active;                                     // IR*
  std::set<std::pair<EntityId, std::string>> fired;
  std::map<InteractionId, FlowTypeId> delivery;
  std::map<InteractionId, Activation> derivation;
  std::vector<Diagnostic> diagnostics;              // inadmissible emissions (warn)
};

/// Least fixed point of seed / fire / propagate / relay. Throws
/// `unknown-context` and `emission-not-inbound`.
[[nodiscard]] ActiveSet compute_active_set(const WorldModel & model, const ContextDecl & context);
[[nodiscard]] ActiveSet compute_active_set(const WorldModel & model, const ContextId & context);

struct DerivationNode
{
  InteractionId interaction;
  FlowTypeId flow;
  Activation step;
  std::vector<DerivationNode> children;
};

/// Derivation tree whose leaves are environment emissions. Throws
/// `not-active` when the interaction is not in IR*.
[[nodiscard]] DerivationNode explain_activation(const ActiveSet & active, const InteractionId & interaction);

[[nodiscard]] std::string render_derivation(const DerivationNode & node);

struct TraceStep
{
  ContextId context;
  EntityId entity;
  std::string function;
  std::string before;
  FlowTypeId input;
  std::string after;
  InteractionId via;
};

struct SimulationTrace
{
  std::vector<TraceStep> steps;
  std::map<std::pair<EntityId, std::string>, std::string> final_states;
  std::vector<Diagnostic> diagnostics;  // `no-transition` stutters
};

/// Delivers each context's active flows to stateful functions in
/// (derivation layer, interaction id) order and applies tau. Throws
/// `unknown-context`.
[[nodiscard]] SimulationTrace simulate(const WorldModel & model, const std::vector<ContextId> & schedule);

}  // namespace psworld
