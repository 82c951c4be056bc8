#include "psworld/validate.hpp"

#include <map>
#include <set>

#include "psworld/classify.hpp"
#include "psworld/outcome.hpp"

namespace psworld
{
namespace
{

class Collector
{
public:
  void error(std::string rule, std::string message, const SourceSpan & span, std::string principle)
  {
    out_.push_back({Severity::Error, std::move(rule), std::move(message), span, std::move(principle)});
  }
  void warn(std::string rule, std::string message, const SourceSpan & span, std::string principle)
  {
    out_.push_back({Severity::Warn, std::move(rule), std::move(message), span, std::move(principle)});
  }
  std::vector<Diagnostic> take() { return std::move(out_); }

private:
  std::vector<Diagnostic> out_;
};

template <class T>
void check_unique(Collector & c, const std::vector<T> & items, const char * what)
{
  std::set<std::string> seen;
  for (const auto & item : items) {
    if (!seen.insert(item.id).second) {
      c.error("duplicate-id", std::string(what) + " '" + item.id + "' is declared more than once",
              item.span, "closed-world");
    }
  }
}

void check_entities(Collector & c, const WorldModel & m)
{
  for (const auto & e : m.entities) {
    std::set<std::string> fn_names;
    for (const auto & f : e.functions) {
      if (!fn_names.insert(f.name).second) {
        c.error("duplicate-id", "function '" + f.name + "' declared twice on '" + e.id + "'", f.span,
                "closed-world");
      }
    }
    switch (e.kind) {
      case EntityKind::InternalFunction:
        if (e.functions.empty()) {
          c.error("function-missing", "internal entity '" + e.id + "' performs no function", e.span,
                  "function-signature");
        }
        if (!e.relay.empty()) {
          c.error("relay-not-external", "relay behavior is only declared on external systems", e.span,
                  "external-system");
        }
        break;
      case EntityKind::ExternalSystem:
        break;
      case EntityKind::Environment:
        if (!e.functions.empty() || !e.relay.empty()) {
          c.error("env-has-structure", "environment entity '" + e.id + "' is a black-box source",
                  e.span, "environment");
        }
        break;
    }
    if (e.kind != EntityKind::Environment && !e.emits.empty()) {
      c.error("emits-not-env", "only environment entities emit exogenous flows", e.span, "environment");
    }

    for (const auto & f : e.functions) {
      if (f.domain.empty()) {
        c.error("function-empty-domain", "function '" + e.id + "." + f.name + "' has an empty domain",
                f.span, "function-signature");
      }
      if (f.codomain.empty()) {
        c.error("function-empty-codomain",
                "function '" + e.id + "." + f.name + "' has an empty codomain", f.span, "function-signature");
      }
      for (const auto & [in, outs] : f.output_map) {
        if (!f.domain.count(in)) {
          c.error("map-input-outside-domain",
                  "'" + e.id + "." + f.name + "' maps '" + in + "' which is not in its domain", f.span,
                  "function-signature");
        }
        for (const auto & o : outs) {
          if (!f.codomain.count(o)) {
            c.error("output-outside-codomain",
                    "'" + e.id + "." + f.name + "' produces '" + o + "' outside its codomain", f.span,
                    "function-signature");
          }
        }
      }
      if (!f.states) continue;
      const auto & sm = *f.states;
      if (sm.states.empty()) {
        c.error("empty-state-space", "state space of '" + e.id + "." + f.name + "' is empty", sm.span,
                "state-space");
      }
      if (!sm.has_state(sm.initial)) {
        c.error("initial-not-state", "initial state '" + sm.initial + "' is not declared", sm.span,
                "state-space");
      }
      std::set<std::pair<std::string, std::string>> keys;
      for (const auto & t : sm.transitions) {
        if (!sm.has_state(t.from) || !sm.has_state(t.to)) {
          c.error("transition-leaves-state-space",
                  "transition " + t.from + "," + t.input + " -> " + t.to + " leaves the state space",
                  t.span, "transition");
        }
        if (!f.domain.count(t.input)) {
          c.error("transition-inadmissible-input",
                  "transition on '" + t.input + "' which '" + f.name + "' does not admit", t.span,
                  "transition");
        }
        if (!keys.emplace(t.from, t.input).second) {
          c.error("duplicate-transition", "transition (" + t.from + ", " + t.input + ") declared twice",
                  t.span, "transition");
        }
      }
    }

    for (const auto & r : e.relay) {
      for (const auto & id : r.interactions) {
        const auto * ir = m.find_interaction(id);
        if (ir == nullptr) {
          c.error("unresolved-reference", "relay names undeclared interaction '" + id + "'", r.span,
                  "closed-world");
        } else if (ir->source != e.id) {
          c.error("relay-foreign-interaction",
                  "relay of '" + e.id + "' names '" + id + "' which it does not source", r.span, "external-system");
        }
      }
    }
    for (const auto & em : e.emits) {
      const auto * ir = m.find_interaction(em.via);
      if (ir == nullptr) {
        c.error("unresolved-reference", "emits via undeclared interaction '" + em.via + "'", em.span,
                "closed-world");
      } else if (ir->source != e.id || ir->flow != em.flow) {
        c.error("emission-not-inbound",
                "'" + e.id + "' cannot emit '" + em.flow + "' on '" + em.via + "'", em.span, "environment");
      }
    }
  }
}

void check_interactions(Collector & c, const WorldModel & m, const IdSet & accepted_anywhere)
{
  for (const auto & ir : m.interactions) {
    bool resolved = true;
    for (const auto * endpoint : {&ir.source, &ir.dest}) {
      if (m.find_entity(*endpoint) == nullptr) {
        resolved = false;
        c.error("unresolved-reference",
                "interaction '" + ir.id + "' references undeclared entity '" + *endpoint + "'", ir.span,
                "closed-world");
      }
    }
    if (ir.source == ir.dest && !m.allow_self_loops) {
      c.error("self-loop", "interaction '" + ir.id + "' is a self-loop", ir.span, "admissibility");
    }
    if (!accepted_anywhere.count(ir.flow)) {
      c.error("flow-not-accepted", "flow '" + ir.flow + "' lies in no function's domain", ir.span,
              "flow-type");
    }
    if (!resolved) continue;
    const auto r = resolve_receiver(ir, m);
    switch (r.status) {
      case ReceiverStatus::Inadmissible:
        c.error("inadmissible-flow",
                "flow '" + ir.flow + "' on '" + ir.id + "' is not in the domain of any receiving function of '" +
                  ir.dest + "'",
                ir.span, "admissibility");
        break;
      case ReceiverStatus::Ambiguous:
        c.error("ambiguous-receiver",
                "several functions of '" + ir.dest + "' admit '" + ir.flow + "'; name one with recv",
                ir.span, "receiving-function");
        break;
      case ReceiverStatus::UnknownFunction:
        c.error("unresolved-reference",
                "'" + ir.dest + "' has no function '" + ir.dest_function + "'", ir.span, "closed-world");
        break;
      default:
        break;
    }
  }
}

void check_boundary(Collector & c, const WorldModel & m)
{
  if (!m.boundary) {
    c.error("missing-boundary", "no boundary is declared", {}, "boundary-commitment");
    return;
  }
  const auto & b = *m.boundary;
  const IdSet universe = m.entity_ids();
  const IdSet ext = external_side(b, m);
  for (const auto & id : b.internal) {
    if (!universe.count(id)) {
      c.error("unresolved-reference", "boundary names undeclared entity '" + id + "'", b.span, "closed-world");
    }
    if (ext.count(id)) {
      const auto * e = m.find_entity(id);
      c.error("boundary-not-partition", "'" + id + "' is on both sides of the boundary",
              e != nullptr ? e->span : b.span, "boundary-partition");
    }
  }
  for (const auto & id : ext) {
    if (!universe.count(id)) {
      c.error("unresolved-reference", "boundary names undeclared entity '" + id + "'", b.span, "closed-world");
    }
  }
  for (const auto & e : m.entities) {
    if (!b.internal.count(e.id) && !ext.count(e.id)) {
      c.error("boundary-not-partition", "'" + e.id + "' is on neither side of the boundary", e.span,
              "boundary-partition");
    }
    if (e.kind == EntityKind::Environment && b.internal.count(e.id)) {
      c.error("env-internal", "environment entity '" + e.id + "' is inside the boundary", e.span,
              "environment");
    }
  }

  bool crosses = false;
  for (const auto & ir : m.interactions) {
    const bool s = b.internal.count(ir.source) > 0;
    const bool d = b.internal.count(ir.dest) > 0;
    if (s != d) crosses = true;
  }
  if (!crosses && !b.internal.empty()) {
    c.warn("closed-syssol", "no interaction crosses the boundary", b.span, "open-system");
  }
}

void check_contexts(Collector & c, const WorldModel & m)
{
  for (const auto & ctx : m.contexts) {
    std::set<Emission> seen;
    for (const auto & em : ctx.emissions) {
      if (!seen.insert(em).second) {
        c.warn("duplicate-emission", "emission repeated in context '" + ctx.id + "'", em.span, "context-activation");
      }
      const auto * src = m.find_entity(em.source);
      const auto * ir = m.find_interaction(em.via);
      if (src == nullptr || ir == nullptr) {
        c.error("unresolved-reference", "emission in '" + ctx.id + "' references undeclared ids",
                em.span, "closed-world");
        continue;
      }
      if (src->kind != EntityKind::Environment || ir->source != em.source || ir->flow != em.flow ||
          !m.structurally_available(*ir)) {
        c.error("emission-not-inbound",
                "emission of '" + em.flow + "' on '" + em.via + "' is not an inbound flow from the environment",
                em.span, "environment");
      } else if (!admissible(*ir, m)) {
        c.warn("inadmissible-emission", "emission on '" + em.via + "' is not admissible at '" + ir->dest + "'",
               em.span, "context-activation");
      }
    }
  }
}

void check_outcomes(Collector & c, const WorldModel & m)
{
  const IdSet goals = m.goal_ids();
  for (const auto & o : m.outcomes) {
    for (const auto & g : o.supports) {
      if (!goals.count(g)) {
        c.error("unresolved-reference", "outcome '" + o.id + "' supports undeclared goal '" + g + "'",
                o.span, "closed-world");
      }
    }
    if (o.groundings.empty()) {
      c.warn("outcome-without-grounding", "outcome '" + o.id + "' declares no grounding", o.span, "outcome-grounding");
      continue;
    }
    bool ok = true;
    for (const auto & alt : o.groundings) {
      if (alt.empty()) {
        c.error("empty-grounding", "outcome '" + o.id + "' has an empty grounding alternative", o.span,
                "outcome-grounding");
        ok = false;
      }
      for (const auto & id : alt) {
        if (m.find_interaction(id) == nullptr) {
          c.error("unresolved-reference", "outcome '" + o.id + "' grounds on undeclared interaction '" + id + "'",
                  o.span, "closed-world");
          ok = false;
        }
      }
    }
    if (!ok) continue;
    try {
      check_outcome_grounding(m, o);
    } catch (const Error & err) {
      c.error(err.code(), err.what(), o.span, "outcome-grounding");
      continue;
    }
    if (o.desired() && m.boundary) {
      try {
        if (classify_outcome(m, o) == OutcomeClass::Internal) {
          c.error("desired-not-external", "desired outcome '" + o.id + "' is internal", o.span, "desired-outcome");
        }
      } catch (const Error &) {
        // unresolved endpoints are reported by the interaction pass
      }
    }
  }
}

void check_stakeholders(Collector & c, const WorldModel & m)
{
  for (const auto & sh : m.stakeholders) {
    if (sh.goals.empty()) {
      c.error("stakeholder-without-goal", "stakeholder '" + sh.id + "' declares no goal", sh.span, "stakeholder-goals");
    }
  }
  for (const auto & r : m.requirements) {
    if (!m.in_syssol(r.subject)) {
      c.error("requirement-out-of-scope", "requirement '" + r.id + "' is not about the system solution",
              r.span, "requirement-scope");
    }
    if (r.condition && m.find_context(*r.condition) == nullptr) {
      c.error("unresolved-reference", "requirement '" + r.id + "' names undeclared context", r.span,
              "closed-world");
    }
  }
}

}  // namespace

std::vector<Diagnostic> check_duplicate_ids(const WorldModel & model)
{
  Collector c;
  check_unique(c, model.entities, "entity");
  check_unique(c, model.interactions, "interaction");
  check_unique(c, model.contexts, "context");
  check_unique(c, model.outcomes, "outcome");
  check_unique(c, model.stakeholders, "stakeholder");
  check_unique(c, model.requirements, "requirement");
  std::vector<Goal> goals;
  for (const auto & sh : model.stakeholders) goals.insert(goals.end(), sh.goals.begin(), sh.goals.end());
  check_unique(c, goals, "goal");
  return c.take();
}

std::vector<Diagnostic> validate_model(const WorldModel & model)
{
  Collector c;
  IdSet accepted;
  for (const auto & e : model.entities) {
    for (const auto & f : e.functions) accepted.insert(f.domain.begin(), f.domain.end());
  }
  if (model.entities.empty()) c.error("no-entities", "the model declares no entities", {}, "closed-world");
  check_entities(c, model);
  check_interactions(c, model, accepted);
  check_boundary(c, model);
  check_contexts(c, model);
  check_outcomes(c, model);
  check_stakeholders(c, model);
  auto out = check_duplicate_ids(model);
  auto rest = c.take();
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace psworld
