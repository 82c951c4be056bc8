#include "psworld/report.hpp"

#include <iomanip>
#include <sstream>

namespace psworld
{

OutcomeMatrix outcome_matrix(const WorldModel & model, const IdSet & contexts)
{
  OutcomeMatrix m;
  for (const auto & c : model.contexts) {
    if (contexts.count(c.id)) m.contexts.push_back(c.id);
  }
  for (const auto & c : contexts) {
    if (model.find_context(c) == nullptr) throw Error("unknown-context", "context '" + c + "' is not declared");
  }
  std::vector<ActiveSet> active;
  for (const auto & c : m.contexts) active.push_back(compute_active_set(model, c));

  for (const auto & o : model.outcomes) {
    m.outcomes.push_back(o.id);
    try {
      m.classification[o.id] = to_string(classify_outcome(model, o));
    } catch (const Error & e) {
      m.classification[o.id] = e.code();
    }
    for (std::size_t i = 0; i < m.contexts.size(); ++i) {
      m.truth[o.id][m.contexts[i]] = grounding_truth(o, active[i].active);
    }
  }
  return m;
}

namespace report
{

namespace
{

ordered_json ids(const IdSet & s) { return ordered_json(std::vector<std::string>(s.begin(), s.end())); }

const char * tf(bool b) { return b ? "TRUE" : "FALSE"; }

std::string pad(const std::string & s, std::size_t width)
{
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string braces(const IdSet & s)
{
  std::string out = "{";
  for (auto it = s.begin(); it != s.end(); ++it) {
    if (it != s.begin()) out += ", ";
    out += *it;
  }
  return out + "}";
}

ordered_json to_json(const Diagnostic & d)
{
  ordered_json j;
  j["severity"] = to_string(d.severity);
  j["rule"] = d.rule;
  j["message"] = d.message;
  if (d.span.known()) {
    j["span"] = {{"file", d.span.file}, {"line", d.span.line}, {"column", d.span.column}, {"length", d.span.length}};
  }
  if (!d.principle.empty()) j["principle"] = d.principle;
  return j;
}

ordered_json to_json(const std::vector<Diagnostic> & ds)
{
  ordered_json j = ordered_json::array();
  for (const auto & d : ds) j.push_back(to_json(d));
  return j;
}

ordered_json to_json(const Classification & c)
{
  ordered_json j = ordered_json::object();
  for (const auto & [id, cls] : c) j[id] = to_string(cls);
  return j;
}

ordered_json to_json(const ActiveSet & a)
{
  ordered_json j;
  j["context"] = a.context;
  j["active"] = ids(a.active);
  ordered_json fired = ordered_json::array();
  for (const auto & [e, f] : a.fired) fired.push_back(e + "." + f);
  j["fired"] = fired;
  ordered_json deriv = ordered_json::object();
  for (const auto & [id, step] : a.derivation) {
    deriv[id] = {{"rule", to_string(step.rule)}, {"entity", step.entity}, {"function", step.function},
                 {"premises", step.premises}, {"layer", step.layer}};
  }
  j["derivation"] = deriv;
  j["diagnostics"] = to_json(a.diagnostics);
  return j;
}

ordered_json to_json(const OutcomeVerdict & v)
{
  ordered_json j;
  j["outcome"] = v.outcome;
  j["context"] = v.context;
  j["truth"] = v.truth;
  j["classification"] = to_string(v.classification);
  j["witness"] = v.witness ? ids(*v.witness) : ordered_json(nullptr);
  return j;
}

ordered_json to_json(const InvarianceResult & r)
{
  ordered_json j;
  j["status"] = to_string(r.status);
  j["witness"] = ids(r.witness);
  j["truth"] = {r.truth1, r.truth2};
  j["only_in_first"] = ids(r.only_in_first);
  j["only_in_second"] = ids(r.only_in_second);
  return j;
}

ordered_json to_json(const MinimalSetReport & r)
{
  ordered_json j;
  j["outcome"] = r.outcome;
  j["contexts"] = ids(r.context_family);
  j["candidates"] = ids(r.candidates);
  ordered_json sets = ordered_json::array();
  for (const auto & s : r.minimal_sets) sets.push_back(ids(s));
  j["minimal_sets"] = sets;
  j["essential"] = ids(r.essential);
  j["nonessential"] = ids(r.nonessential);
  j["constant_outcome"] = r.constant_outcome;
  j["certified"] = r.certified;
  return j;
}

ordered_json to_json(const NonessentialReport & r)
{
  ordered_json j;
  j["nonessential"] = ids(r.nonessential);
  j["activation_support"] = ids(r.activation_support);
  j["certified"] = ids(r.certified);
  j["vacuous"] = r.vacuous;
  ordered_json per = ordered_json::array();
  for (const auto & m : r.per_outcome) per.push_back(to_json(m));
  j["per_outcome"] = per;
  return j;
}

ordered_json to_json(const RescopePlan & p)
{
  ordered_json j;
  j["internal"] = ids(p.derived_boundary.internal);
  j["external"] = p.derived_boundary.external ? ids(*p.derived_boundary.external) : ordered_json(nullptr);
  ordered_json rows = ordered_json::object();
  for (const auto & [id, change] : p.reclassification) {
    rows[id] = {{"before", to_string(change.first)}, {"after", to_string(change.second)}};
  }
  j["reclassification"] = rows;
  return j;
}

ordered_json to_json(const BoundaryIndependenceReport & r)
{
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto & row : r.rows) {
    ordered_json x;
    x["outcome"] = row.outcome;
    x["context"] = row.context;
    x["truth_before"] = row.truth_before;
    x["truth_after"] = row.truth_after;
    x["class_before"] = row.class_before ? ordered_json(to_string(*row.class_before)) : ordered_json(nullptr);
    x["class_after"] = row.class_after ? ordered_json(to_string(*row.class_after)) : ordered_json(nullptr);
    if (!row.error.empty()) x["error"] = row.error;
    rows.push_back(x);
  }
  j["rows"] = rows;
  j["defects"] = r.defects;
  j["flips"] = r.flips;
  return j;
}

namespace
{

ordered_json cell_json(const ChecklistCell & c)
{
  ordered_json j;
  j["outcome"] = c.outcome;
  j["context"] = c.context;
  j["construct"] = to_string(c.construct);
  j["status"] = c.present ? "present" : "missing";
  j["detail"] = c.detail;
  j["missing"] = c.missing;
  return j;
}

}  // namespace

ordered_json to_json(const SufficiencyReport & r)
{
  ordered_json j;
  j["verdict"] = r.sufficient ? "sufficient" : "insufficient";
  j["vacuous"] = r.vacuous;
  ordered_json cells = ordered_json::array();
  for (const auto & c : r.checklist) cells.push_back(cell_json(c));
  j["checklist"] = cells;
  ordered_json support = ordered_json::object();
  for (const auto & [g, os] : r.goal_support) support[g] = ids(os);
  j["goal_support"] = support;
  ordered_json truth = ordered_json::object();
  for (const auto & [o, per] : r.truth) {
    for (const auto & [c, t] : per) truth[o][c] = t;
  }
  j["truth"] = truth;
  j["deltas"] = ordered_json::array();
  return j;
}

ordered_json to_json(const ImpactReport & r)
{
  ordered_json j = to_json(r.after);
  ordered_json deltas = ordered_json::array();
  for (const auto & c : r.deltas) deltas.push_back(cell_json(c));
  j["deltas"] = deltas;
  j["verdict_before"] = r.before.sufficient ? "sufficient" : "insufficient";
  j["actions"] = r.actions;
  return j;
}

ordered_json to_json(const std::map<GoalId, GoalStatus> & goals)
{
  ordered_json j = ordered_json::object();
  for (const auto & [g, s] : goals) {
    ordered_json failing = ordered_json::array();
    for (const auto & [o, c] : s.failing) failing.push_back({{"outcome", o}, {"context", c}});
    j[g] = {{"satisfied", s.satisfied}, {"unsupported", s.unsupported}, {"failing", failing},
            {"rule", "conjunction over linked desired outcomes and declared contexts"}};
  }
  return j;
}

ordered_json to_json(const SimulationTrace & t)
{
  ordered_json j;
  ordered_json steps = ordered_json::array();
  for (const auto & s : t.steps) {
    steps.push_back({{"context", s.context}, {"entity", s.entity}, {"function", s.function}, {"before", s.before},
                     {"input", s.input}, {"after", s.after}, {"via", s.via}});
  }
  j["steps"] = steps;
  ordered_json finals = ordered_json::object();
  for (const auto & [key, state] : t.final_states) finals[key.first + "." + key.second] = state;
  j["final_states"] = finals;
  j["diagnostics"] = to_json(t.diagnostics);
  return j;
}

ordered_json to_json(const OutcomeMatrix & m)
{
  ordered_json j;
  j["contexts"] = m.contexts;
  ordered_json rows = ordered_json::array();
  for (const auto & o : m.outcomes) {
    ordered_json truth = ordered_json::object();
    for (const auto & c : m.contexts) truth[c] = m.truth.at(o).at(c);
    rows.push_back({{"outcome", o}, {"classification", m.classification.at(o)}, {"truth", truth}});
  }
  j["outcomes"] = rows;
  return j;
}

std::string text(const Classification & c)
{
  std::ostringstream out;
  for (const auto & [id, cls] : c) out << pad(id, 28) << ' ' << to_string(cls) << '\n';
  const auto sizes = partition_sizes(c);
  out << "internal " << sizes[0] << ", inbound " << sizes[1] << ", outbound " << sizes[2] << ", external "
      << sizes[3] << '\n';
  return out.str();
}

std::string text(const ActiveSet & a)
{
  std::ostringstream out;
  out << "IR*(" << a.context << ") = " << braces(a.active) << '\n';
  for (const auto & [id, step] : a.derivation) {
    out << "  " << pad(id, 26) << " layer " << step.layer << "  " << to_string(step.rule) << ' ' << step.entity;
    if (!step.function.empty()) out << '.' << step.function;
    out << '\n';
  }
  return out.str();
}

std::string text(const OutcomeVerdict & v)
{
  std::ostringstream out;
  out << v.outcome << " under " << v.context << ": " << tf(v.truth) << " (" << to_string(v.classification) << ")";
  if (v.witness) out << " witness " << braces(*v.witness);
  return out.str() + "\n";
}

std::string text(const InvarianceResult & r)
{
  std::ostringstream out;
  out << to_string(r.status) << ": " << tf(r.truth1) << " / " << tf(r.truth2);
  if (!r.witness.empty()) out << ", shared grounding " << braces(r.witness);
  if (!r.only_in_first.empty()) out << ", only in first " << braces(r.only_in_first);
  if (!r.only_in_second.empty()) out << ", only in second " << braces(r.only_in_second);
  return out.str() + "\n";
}

std::string text(const MinimalSetReport & r)
{
  std::ostringstream out;
  out << "minimal sets for " << r.outcome << " over " << braces(r.context_family);
  if (r.constant_outcome) out << " (constant outcome)";
  if (!r.certified) out << " (heuristic, not certified)";
  out << '\n';
  for (const auto & s : r.minimal_sets) out << "  " << braces(s) << '\n';
  out << "essential " << braces(r.essential) << '\n';
  out << "nonessential " << braces(r.nonessential) << '\n';
  return out.str();
}

std::string text(const NonessentialReport & r)
{
  std::ostringstream out;
  out << "in no minimal set      " << braces(r.nonessential) << '\n';
  out << "activation support     " << braces(r.activation_support) << '\n';
  out << "certified removable    " << braces(r.certified) << (r.vacuous ? " (vacuous: no desired outcomes)" : "")
      << '\n';
  return out.str();
}

std::string text(const RescopePlan & p)
{
  std::ostringstream out;
  out << "boundary internal " << braces(p.derived_boundary.internal) << '\n';
  for (const auto & [id, change] : p.reclassification) {
    out << "  " << pad(id, 26) << ' ' << pad(to_string(change.first), 9) << " -> " << to_string(change.second) << '\n';
  }
  if (p.reclassification.empty()) out << "  no interaction changes class\n";
  return out.str();
}

std::string text(const BoundaryIndependenceReport & r)
{
  std::ostringstream out;
  for (const auto & row : r.rows) {
    out << pad(row.outcome, 20) << ' ' << pad(row.context, 12) << ' ' << tf(row.truth_before) << " -> "
        << tf(row.truth_after);
    if (!row.error.empty()) {
      out << "  (" << row.error << ")\n";
      continue;
    }
    out << "  " << to_string(*row.class_before) << " -> " << to_string(*row.class_after);
    if (row.classification_changed()) out << "  *";
    out << '\n';
  }
  out << "truth defects " << r.defects << ", classification flips " << r.flips << '\n';
  return out.str();
}

std::string text(const SufficiencyReport & r)
{
  std::ostringstream out;
  out << (r.sufficient ? "sufficient" : "insufficient") << (r.vacuous ? " (vacuous)" : "") << '\n';
  const ChecklistCell * prev = nullptr;
  for (const auto & c : r.checklist) {
    if (prev == nullptr || prev->outcome != c.outcome || prev->context != c.context) {
      out << "  " << pad(c.outcome, 20) << ' ' << pad(c.context, 12);
      for (const auto & k : {Construct::Boundary, Construct::Classification, Construct::Admissibility,
                             Construct::Grounding}) {
        const auto * cell = r.cell(c.outcome, c.context, k);
        out << " (" << construct_number(k) << ")" << (cell->present ? "ok" : "--");
      }
      out << '\n';
    }
    if (!c.present) {
      out << "      (" << construct_number(c.construct) << ") " << to_string(c.construct) << ": " << c.detail;
      if (!c.missing.empty()) {
        out << " [";
        for (std::size_t i = 0; i < c.missing.size(); ++i) out << (i ? ", " : "") << c.missing[i];
        out << "]";
      }
      out << '\n';
    }
    prev = &c;
  }
  for (const auto & [g, os] : r.goal_support) out << "  goal " << pad(g, 12) << " supported by " << braces(os) << '\n';
  for (const auto & [o, per] : r.truth) {
    out << "  " << pad(o, 20);
    for (const auto & [c, t] : per) out << ' ' << c << '=' << tf(t);
    out << '\n';
  }
  return out.str();
}

std::string text(const ImpactReport & r)
{
  std::ostringstream out;
  out << "before: " << (r.before.sufficient ? "sufficient" : "insufficient") << '\n';
  out << "after:  " << (r.after.sufficient ? "sufficient" : "insufficient") << '\n';
  for (const auto & c : r.deltas) {
    out << "  now missing: " << c.outcome << " / " << c.context << " (" << construct_number(c.construct) << ") "
        << to_string(c.construct) << ": " << c.detail << '\n';
  }
  for (const auto & a : r.actions) out << "  to do: " << a << '\n';
  return out.str();
}

std::string text(const std::map<GoalId, GoalStatus> & goals)
{
  std::ostringstream out;
  for (const auto & [g, s] : goals) {
    out << pad(g, 12) << ' ' << (s.satisfied ? "satisfied" : "unsatisfied");
    if (s.unsupported) out << " (unsupported-goal)";
    for (const auto & [o, c] : s.failing) out << " [" << o << " @ " << c << "]";
    out << '\n';
  }
  out << "(conservative rule: every linked desired outcome TRUE in every context)\n";
  return out.str();
}

std::string text(const SimulationTrace & t)
{
  std::ostringstream out;
  for (const auto & s : t.steps) {
    out << pad(s.context, 10) << ' ' << s.entity << '.' << s.function << ": " << s.before << " --" << s.input
        << "--> " << s.after << "  via " << s.via << '\n';
  }
  out << "final:";
  for (const auto & [key, state] : t.final_states) out << ' ' << key.first << '=' << state;
  return out.str() + "\n";
}

std::string text(const OutcomeMatrix & m)
{
  std::size_t w = 8;
  for (const auto & o : m.outcomes) w = std::max(w, o.size());
  std::ostringstream out;
  out << pad("outcome", w) << "  " << pad("class", 8);
  for (const auto & c : m.contexts) out << "  " << pad(c, std::max<std::size_t>(c.size(), 5));
  out << '\n';
  for (const auto & o : m.outcomes) {
    out << pad(o, w) << "  " << pad(m.classification.at(o), 8);
    for (const auto & c : m.contexts) out << "  " << pad(tf(m.truth.at(o).at(c)), std::max<std::size_t>(c.size(), 5));
    out << '\n';
  }
  return out.str();
}

}  // namespace report
}  // namespace psworld
