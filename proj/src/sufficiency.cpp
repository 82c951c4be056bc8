#include "psworld/sufficiency.hpp"

#include <algorithm>

#include "psworld/activation.hpp"
#include "psworld/classify.hpp"
#include "psworld/outcome.hpp"

namespace psworld
{

std::string to_string(Construct c)
{
  switch (c) {
    case Construct::Boundary: return "boundary";
    case Construct::Classification: return "classification";
    case Construct::Admissibility: return "admissibility";
    case Construct::Grounding: return "grounding";
  }
  return "?";
}

int construct_number(Construct c) noexcept { return static_cast<int>(c) + 1; }

const ChecklistCell * SufficiencyReport::cell(const OutcomeId & o, const ContextId & c, Construct k) const
{
  for (const auto & cell : checklist) {
    if (cell.outcome == o && cell.context == c && cell.construct == k) return &cell;
  }
  return nullptr;
}

std::vector<ChecklistCell> SufficiencyReport::missing_cells() const
{
  std::vector<ChecklistCell> out;
  std::copy_if(checklist.begin(), checklist.end(), std::back_inserter(out),
               [](const ChecklistCell & c) { return !c.present; });
  return out;
}

namespace
{

struct Finding
{
  bool present = true;
  std::string detail;
  std::vector<std::string> missing;

  void fail(std::string id, const std::string & why)
  {
    if (present) detail = why;
    present = false;
    missing.push_back(std::move(id));
  }
};

bool endpoints_resolve(const WorldModel & m, const Interaction & ir)
{
  return m.find_entity(ir.source) != nullptr && m.find_entity(ir.dest) != nullptr;
}

// (1) Model-wide: a declared boundary that partitions the entities.
Finding check_boundary(const WorldModel & m)
{
  Finding f;
  if (!m.boundary) {
    f.fail("boundary", "no boundary is declared");
    return f;
  }
  const IdSet universe = m.entity_ids();
  const IdSet ext = external_side(*m.boundary, m);
  for (const auto & id : m.boundary->internal) {
    if (!universe.count(id)) f.fail(id, "boundary names an undeclared entity");
    else if (ext.count(id)) f.fail(id, "entity lies on both sides of the boundary");
    else if (m.find_entity(id)->kind == EntityKind::Environment) f.fail(id, "environment entity inside the boundary");
  }
  for (const auto & id : ext) {
    if (!universe.count(id)) f.fail(id, "boundary names an undeclared entity");
  }
  for (const auto & e : m.entities) {
    if (!m.boundary->internal.count(e.id) && !ext.count(e.id)) f.fail(e.id, "entity lies on neither side");
  }
  return f;
}

// (2) Every interaction is classifiable and every grounding reference is in IR.
Finding check_classification(const WorldModel & m, const OutcomeDecl & o)
{
  Finding f;
  for (const auto & ir : m.interactions) {
    if (!endpoints_resolve(m, ir)) f.fail(ir.id, "interaction endpoint does not resolve");
  }
  for (const auto & id : o.grounding_interactions()) {
    if (m.find_interaction(id) == nullptr) f.fail(id, "grounding interaction is absent from IR");
  }
  return f;
}

// (3) Grounding interactions that resolve have a receiving function admitting
// their flow. Unresolved references belong to (2).
Finding check_admissibility(const WorldModel & m, const OutcomeDecl & o)
{
  Finding f;
  for (const auto & id : o.grounding_interactions()) {
    const auto * ir = m.find_interaction(id);
    if (ir == nullptr || !endpoints_resolve(m, *ir)) continue;
    switch (resolve_receiver(*ir, m).status) {
      case ReceiverStatus::Resolved: break;
      case ReceiverStatus::NoFunctions: f.fail(id, "destination declares no receiving function"); break;
      case ReceiverStatus::Ambiguous: f.fail(id, "receiving function is ambiguous"); break;
      case ReceiverStatus::UnknownFunction: f.fail(id, "named receiving function is undeclared"); break;
      case ReceiverStatus::Inadmissible:
      case ReceiverStatus::UnknownEntity: f.fail(id, "flow is outside the receiving domain"); break;
    }
  }
  return f;
}

// (4) A declared grounding whose resolvable alternatives touch SysSol.
Finding check_grounding(const WorldModel & m, const OutcomeDecl & o)
{
  Finding f;
  if (o.groundings.empty()) {
    f.fail(o.id, "no grounding is declared");
    return f;
  }
  for (std::size_t i = 0; i < o.groundings.size(); ++i) {
    const auto & alt = o.groundings[i];
    const std::string label = o.id + "#" + std::to_string(i + 1);
    if (alt.empty()) {
      f.fail(label, "grounding alternative is empty");
      continue;
    }
    bool resolved = true;
    bool participates = false;
    for (const auto & id : alt) {
      const auto * ir = m.find_interaction(id);
      if (ir == nullptr || !endpoints_resolve(m, *ir)) {
        resolved = false;
        continue;
      }
      participates = participates || m.structurally_available(*ir);
    }
    if (resolved && !participates) f.fail(label, "grounding alternative does not involve the system");
  }
  return f;
}

}  // namespace

SufficiencyReport audit_sufficiency(const WorldModel & model, const IdSet & desired, const IdSet & contexts)
{
  for (const auto & o : desired) {
    if (model.find_outcome(o) == nullptr) throw Error("unknown-outcome", "outcome '" + o + "' is not declared");
  }
  for (const auto & c : contexts) {
    if (model.find_context(c) == nullptr) throw Error("unknown-context", "context '" + c + "' is not declared");
  }

  SufficiencyReport report;
  report.vacuous = desired.empty();
  const Finding boundary = check_boundary(model);

  for (const auto & o_id : desired) {
    const auto & o = *model.find_outcome(o_id);
    const Finding per_outcome[] = {boundary, check_classification(model, o), check_admissibility(model, o),
                                   check_grounding(model, o)};
    for (const auto & c : contexts) {
      for (int k = 0; k < 4; ++k) {
        const auto & f = per_outcome[k];
        report.checklist.push_back({o_id, c, static_cast<Construct>(k), f.present, f.detail, f.missing});
        if (!f.present) report.sufficient = false;
      }
    }
  }

  for (const auto & g : model.goal_ids()) {
    auto & support = report.goal_support[g];
    for (const auto & o_id : desired) {
      const auto & supports = model.find_outcome(o_id)->supports;
      if (std::find(supports.begin(), supports.end(), g) != supports.end()) support.insert(o_id);
    }
  }

  if (report.sufficient) {
    for (const auto & c : contexts) {
      const ActiveSet active = compute_active_set(model, c);
      for (const auto & o_id : desired) {
        report.truth[o_id][c] = grounding_truth(*model.find_outcome(o_id), active.active);
      }
    }
  }
  return report;
}

ImpactReport impact_of_new_outcome(const WorldModel & model, const OutcomeDecl & new_outcome, const IdSet & contexts)
{
  if (model.find_outcome(new_outcome.id) != nullptr) {
    throw Error("duplicate-id", "outcome '" + new_outcome.id + "' already exists");
  }
  WorldModel extended = model;
  extended.outcomes.push_back(new_outcome);

  IdSet desired = model.desired_outcome_ids();
  ImpactReport impact;
  impact.before = audit_sufficiency(model, desired, contexts);
  desired.insert(new_outcome.id);
  impact.after = audit_sufficiency(extended, desired, contexts);

  for (const auto & cell : impact.after.checklist) {
    if (cell.present) continue;
    const auto * prior = impact.before.cell(cell.outcome, cell.context, cell.construct);
    if (prior != nullptr && !prior->present) continue;
    impact.deltas.push_back(cell);
  }

  std::set<std::string> seen;
  for (const auto & d : impact.deltas) {
    std::string action = "(" + std::to_string(construct_number(d.construct)) + ") ";
    switch (d.construct) {
      case Construct::Boundary: action += "declare a boundary partitioning the entities"; break;
      case Construct::Classification: action += "declare the missing interactions"; break;
      case Construct::Admissibility: action += "declare receiving functions admitting the grounding flows"; break;
      case Construct::Grounding: action += "declare a system-involving grounding"; break;
    }
    action += " for '" + d.outcome + "'";
    if (!d.missing.empty() && d.construct != Construct::Grounding) {
      action += ":";
      for (const auto & id : d.missing) action += " " + id;
    }
    if (seen.insert(action).second) impact.actions.push_back(action);
  }
  return impact;
}

std::map<GoalId, GoalStatus> check_goal_satisfaction(const WorldModel & model, const IdSet & contexts)
{
  const IdSet desired = model.desired_outcome_ids();
  const SufficiencyReport audit = audit_sufficiency(model, desired, contexts);
  if (!audit.sufficient) {
    const auto missing = audit.missing_cells();
    throw Error("insufficient-model", "goal satisfaction is undefined: " + std::to_string(missing.size()) +
                                        " checklist cells are missing");
  }

  std::map<GoalId, GoalStatus> out;
  for (const auto & [goal, support] : audit.goal_support) {
    GoalStatus status;
    status.unsupported = support.empty();
    for (const auto & o : support) {
      for (const auto & c : contexts) {
        if (!audit.truth.at(o).at(c)) status.failing.emplace_back(o, c);
      }
    }
    status.satisfied = !status.unsupported && status.failing.empty();
    out.emplace(goal, std::move(status));
  }
  return out;
}

}  // namespace psworld
