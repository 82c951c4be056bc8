#include "psworld/boundary.hpp"

namespace psworld
{

std::pair<WorldModel, RescopePlan> rescope(const WorldModel & model, const IdSet & new_internal)
{
  if (!model.boundary) throw Error("missing-boundary", "model declares no boundary");
  if (new_internal.empty()) throw Error("empty-scope", "the new system of interest names no entities");
  for (const auto & id : new_internal) {
    const auto * e = model.find_entity(id);
    if (e == nullptr) throw Error("unknown-entity", "entity '" + id + "' is not declared");
    if (e->kind == EntityKind::Environment) {
      throw Error("env-cannot-be-internal", "environment entity '" + id + "' cannot be inside the boundary");
    }
  }

  RescopePlan plan;
  plan.new_internal = new_internal;
  plan.derived_boundary.internal = new_internal;
  IdSet outside;
  for (const auto & e : model.entities) {
    if (!new_internal.count(e.id)) outside.insert(e.id);
  }
  plan.derived_boundary.external = std::move(outside);
  plan.derived_boundary.span = model.boundary->span;

  for (const auto & ir : model.interactions) {
    const auto before = classify_interaction(ir, *model.boundary, model);
    const auto after = classify_interaction(ir, plan.derived_boundary, model);
    if (before != after) plan.reclassification.emplace(ir.id, std::pair{before, after});
  }

  WorldModel out = model;
  out.boundary = plan.derived_boundary;
  return {std::move(out), std::move(plan)};
}

BoundaryIndependenceReport verify_boundary_independence(
  const WorldModel & before, const WorldModel & after, const IdSet & outcomes, const IdSet & contexts)
{
  WorldModel aligned = after;
  aligned.boundary = before.boundary;
  if (!(aligned == before)) {
    throw Error("not-a-rescope", "the two models differ in more than their boundary");
  }

  BoundaryIndependenceReport report;
  for (const auto & c : contexts) {
    const ActiveSet a0 = compute_active_set(before, c);
    const ActiveSet a1 = compute_active_set(after, c);
    for (const auto & o : outcomes) {
      const auto * decl = before.find_outcome(o);
      if (decl == nullptr) throw Error("unknown-outcome", "outcome '" + o + "' is not declared");
      BoundaryComparison row;
      row.outcome = o;
      row.context = c;
      row.truth_before = grounding_truth(*decl, a0.active);
      row.truth_after = grounding_truth(*decl, a1.active);
      try {
        row.class_before = classify_outcome(before, *decl);
        row.class_after = classify_outcome(after, *decl);
      } catch (const Error & e) {
        row.error = e.what();
      }
      if (!row.truth_equal()) ++report.defects;
      if (row.error.empty() && row.classification_changed()) ++report.flips;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace psworld
