#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "psworld/diagnostic.hpp"

namespace psworld
{

using EntityId = std::string;
using FlowTypeId = std::string;
using InteractionId = std::string;
using OutcomeId = std::string;
using ContextId = std::string;
using GoalId = std::string;
using IdSet = std::set<std::string>;

enum class EntityKind { InternalFunction, ExternalSystem, Environment };
enum class Firing { All, Any };

[[nodiscard]] std::string to_string(EntityKind k);
[[nodiscard]] std::string to_string(Firing f);

struct Transition
{
  std::string from;
  FlowTypeId input;
  std::string to;
  SourceSpan span;

  friend bool operator==(const Transition &, const Transition &) = default;
};

struct StateMachine
{
  std::vector<std::string> states;
  std::string initial;
  std::vector<Transition> transitions;
  SourceSpan span;

  /// tau(state, input), or nullptr when no entry is declared.
  [[nodiscard]] const std::string * next(const std::string & state, const FlowTypeId & input) const;
  [[nodiscard]] bool has_state(const std::string & s) const;

  friend bool operator==(const StateMachine &, const StateMachine &) = default;
};

struct FunctionSpec
{
  std::string name;
  IdSet domain;
  IdSet codomain;
  std::map<FlowTypeId, IdSet> output_map;
  Firing firing = Firing::All;
  std::optional<StateMachine> states;
  SourceSpan span;

  friend bool operator==(const FunctionSpec &, const FunctionSpec &) = default;
};

/// Declared pass-through of an external system: a received flow type
/// activates the named outgoing interactions.
struct RelayRule
{
  FlowTypeId input;
  IdSet interactions;
  SourceSpan span;

  friend bool operator==(const RelayRule &, const RelayRule &) = default;
};

/// What an environment entity is able to produce, and on which interaction.
struct EmitDecl
{
  FlowTypeId flow;
  InteractionId via;
  SourceSpan span;

  friend bool operator==(const EmitDecl &, const EmitDecl &) = default;
};

struct Entity
{
  EntityId id;
  EntityKind kind = EntityKind::InternalFunction;
  std::vector<FunctionSpec> functions;
  std::vector<RelayRule> relay;
  std::vector<EmitDecl> emits;
  SourceSpan span;

  [[nodiscard]] const FunctionSpec * function(const std::string & name) const;

  friend bool operator==(const Entity &, const Entity &) = default;
};

struct Interaction
{
  InteractionId id;
  EntityId source;
  EntityId dest;
  FlowTypeId flow;
  std::string interface;      // empty when not declared
  std::string dest_function;  // empty when resolved by domain
  SourceSpan span;

  friend bool operator==(const Interaction &, const Interaction &) = default;
};

/// The committed partition. When `external` is absent it is the complement
/// of `internal` over the entity universe.
struct Boundary
{
  IdSet internal;
  std::optional<IdSet> external;
  SourceSpan span;

  friend bool operator==(const Boundary &, const Boundary &) = default;
};

struct Emission
{
  EntityId source;
  FlowTypeId flow;
  InteractionId via;
  SourceSpan span;

  friend bool operator==(const Emission &, const Emission &) = default;
  friend auto operator<=>(const Emission & a, const Emission & b)
  {
    return std::tie(a.source, a.flow, a.via) <=> std::tie(b.source, b.flow, b.via);
  }
};

struct ContextDecl
{
  ContextId id;
  std::vector<Emission> emissions;
  SourceSpan span;

  friend bool operator==(const ContextDecl &, const ContextDecl &) = default;
};

/// Grounding alternatives form a disjunction; each alternative is a
/// conjunction of interaction activations.
struct OutcomeDecl
{
  OutcomeId id;
  std::string description;
  std::vector<IdSet> groundings;
  std::vector<GoalId> supports;  // non-empty marks a desired outcome
  SourceSpan span;

  [[nodiscard]] bool desired() const noexcept { return !supports.empty(); }
  [[nodiscard]] IdSet grounding_interactions() const;

  friend bool operator==(const OutcomeDecl &, const OutcomeDecl &) = default;
};

struct Goal
{
  GoalId id;
  std::string description;
  SourceSpan span;

  friend bool operator==(const Goal &, const Goal &) = default;
};

struct Stakeholder
{
  std::string id;
  std::vector<Goal> goals;
  SourceSpan span;

  friend bool operator==(const Stakeholder &, const Stakeholder &) = default;
};

/// Stored and scope-checked only.
struct RequirementDecl
{
  std::string id;
  EntityId subject;
  FlowTypeId input;
  FlowTypeId output;
  std::optional<ContextId> condition;
  SourceSpan span;

  friend bool operator==(const RequirementDecl &, const RequirementDecl &) = default;
};

/// Comment lines emitted ahead of a serialized model. Not part of identity.
struct Provenance
{
  std::vector<std::string> lines;

  friend bool operator==(const Provenance &, const Provenance &) noexcept { return true; }
};

struct WorldModel
{
  bool allow_self_loops = false;
  std::vector<Entity> entities;
  std::vector<Interaction> interactions;
  std::optional<Boundary> boundary;
  std::vector<ContextDecl> contexts;
  std::vector<OutcomeDecl> outcomes;
  std::vector<Stakeholder> stakeholders;
  std::vector<RequirementDecl> requirements;
  Provenance provenance;

  [[nodiscard]] const Entity * find_entity(const EntityId & id) const;
  [[nodiscard]] Entity * find_entity(const EntityId & id);
  [[nodiscard]] const Interaction * find_interaction(const InteractionId & id) const;
  [[nodiscard]] const ContextDecl * find_context(const ContextId & id) const;
  [[nodiscard]] const OutcomeDecl * find_outcome(const OutcomeId & id) const;
  [[nodiscard]] OutcomeDecl * find_outcome(const OutcomeId & id);
  [[nodiscard]] const Goal * find_goal(const GoalId & id) const;

  [[nodiscard]] IdSet entity_ids() const;
  [[nodiscard]] IdSet interaction_ids() const;
  [[nodiscard]] IdSet context_ids() const;
  [[nodiscard]] IdSet goal_ids() const;
  [[nodiscard]] IdSet desired_outcome_ids() const;

  /// Every flow type mentioned by a function, interaction, or emission.
  [[nodiscard]] IdSet flow_types() const;

  /// |SysSol|: entities whose kind is InternalFunction. Activation and
  /// outcome attribution are anchored here; the boundary only classifies.
  [[nodiscard]] bool in_syssol(const EntityId & id) const;

  /// The interaction can carry flow in some context: it touches SysSol.
  [[nodiscard]] bool structurally_available(const Interaction & ir) const;

  friend bool operator==(const WorldModel &, const WorldModel &) = default;
};

/// Effective external side of a boundary over the model's entity universe.
[[nodiscard]] IdSet external_side(const Boundary & b, const WorldModel & m);

/// Boundary B_S = (|SysSol|, ES u Env) derived from entity kinds.
[[nodiscard]] Boundary system_boundary(const WorldModel & m);

}  // namespace psworld
