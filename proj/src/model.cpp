#include "psworld/model.hpp"

#include <algorithm>
#include <sstream>

namespace psworld
{

std::string to_string(Severity s) { return s == Severity::Error ? "error" : "warn"; }

std::string format_diagnostic(const Diagnostic & d)
{
  std::ostringstream out;
  if (d.span.known()) {
    out << d.span.file << ':' << d.span.line << ':' << d.span.column << ": ";
  }
  out << to_string(d.severity) << '[' << d.rule << "] " << d.message;
  if (!d.principle.empty()) out << " (" << d.principle << ')';
  return out.str();
}

bool has_errors(const std::vector<Diagnostic> & diags) noexcept
{
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic & d) {
    return d.severity == Severity::Error;
  });
}

std::string to_string(EntityKind k)
{
  switch (k) {
    case EntityKind::InternalFunction: return "internal";
    case EntityKind::ExternalSystem: return "external";
    case EntityKind::Environment: return "environment";
  }
  return "?";
}

std::string to_string(Firing f) { return f == Firing::All ? "all" : "any"; }

const std::string * StateMachine::next(const std::string & state, const FlowTypeId & input) const
{
  for (const auto & t : transitions) {
    if (t.from == state && t.input == input) return &t.to;
  }
  return nullptr;
}

bool StateMachine::has_state(const std::string & s) const
{
  return std::find(states.begin(), states.end(), s) != states.end();
}

const FunctionSpec * Entity::function(const std::string & name) const
{
  for (const auto & f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

IdSet OutcomeDecl::grounding_interactions() const
{
  IdSet all;
  for (const auto & alt : groundings) all.insert(alt.begin(), alt.end());
  return all;
}

namespace
{

template <class Vec, class Id>
auto find_by_id(Vec & v, const Id & id) -> decltype(&v.front())
{
  auto it = std::find_if(v.begin(), v.end(), [&](const auto & x) { return x.id == id; });
  return it == v.end() ? nullptr : &*it;
}

}  // namespace

const Entity * WorldModel::find_entity(const EntityId & id) const { return find_by_id(entities, id); }
Entity * WorldModel::find_entity(const EntityId & id) { return find_by_id(entities, id); }
const Interaction * WorldModel::find_interaction(const InteractionId & id) const
{
  return find_by_id(interactions, id);
}
const ContextDecl * WorldModel::find_context(const ContextId & id) const { return find_by_id(contexts, id); }
const OutcomeDecl * WorldModel::find_outcome(const OutcomeId & id) const { return find_by_id(outcomes, id); }
OutcomeDecl * WorldModel::find_outcome(const OutcomeId & id) { return find_by_id(outcomes, id); }

const Goal * WorldModel::find_goal(const GoalId & id) const
{
  for (const auto & sh : stakeholders) {
    if (const auto * g = find_by_id(sh.goals, id)) return g;
  }
  return nullptr;
}

IdSet WorldModel::entity_ids() const
{
  IdSet ids;
  for (const auto & e : entities) ids.insert(e.id);
  return ids;
}

IdSet WorldModel::interaction_ids() const
{
  IdSet ids;
  for (const auto & ir : interactions) ids.insert(ir.id);
  return ids;
}

IdSet WorldModel::context_ids() const
{
  IdSet ids;
  for (const auto & c : contexts) ids.insert(c.id);
  return ids;
}

IdSet WorldModel::goal_ids() const
{
  IdSet ids;
  for (const auto & sh : stakeholders) {
    for (const auto & g : sh.goals) ids.insert(g.id);
  }
  return ids;
}

IdSet WorldModel::desired_outcome_ids() const
{
  IdSet ids;
  for (const auto & o : outcomes) {
    if (o.desired()) ids.insert(o.id);
  }
  return ids;
}

IdSet WorldModel::flow_types() const
{
  IdSet flows;
  for (const auto & e : entities) {
    for (const auto & f : e.functions) {
      flows.insert(f.domain.begin(), f.domain.end());
      flows.insert(f.codomain.begin(), f.codomain.end());
    }
    for (const auto & em : e.emits) flows.insert(em.flow);
  }
  for (const auto & ir : interactions) flows.insert(ir.flow);
  for (const auto & c : contexts) {
    for (const auto & em : c.emissions) flows.insert(em.flow);
  }
  return flows;
}

bool WorldModel::in_syssol(const EntityId & id) const
{
  const auto * e = find_entity(id);
  return e != nullptr && e->kind == EntityKind::InternalFunction;
}

bool WorldModel::structurally_available(const Interaction & ir) const
{
  return in_syssol(ir.source) || in_syssol(ir.dest);
}

IdSet external_side(const Boundary & b, const WorldModel & m)
{
  if (b.external) return *b.external;
  IdSet ext;
  for (const auto & e : m.entities) {
    if (!b.internal.count(e.id)) ext.insert(e.id);
  }
  return ext;
}

Boundary system_boundary(const WorldModel & m)
{
  Boundary b;
  for (const auto & e : m.entities) {
    if (e.kind == EntityKind::InternalFunction) b.internal.insert(e.id);
  }
  return b;
}

}  // namespace psworld
