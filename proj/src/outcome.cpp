#include "psworld/outcome.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace psworld
{

std::string to_string(OutcomeClass c) { return c == OutcomeClass::Internal ? "internal" : "external"; }

std::string to_string(InvarianceStatus s)
{
  switch (s) {
    case InvarianceStatus::Invariant: return "invariant";
    case InvarianceStatus::NotComparable: return "not-comparable";
    case InvarianceStatus::Differs: return "differs";
  }
  return "?";
}

namespace
{

std::string join(const IdSet & ids)
{
  std::string out = "{";
  bool first = true;
  for (const auto & id : ids) {
    if (!first) out += ", ";
    out += id;
    first = false;
  }
  return out + "}";
}

const OutcomeDecl & require_outcome(const WorldModel & m, const OutcomeId & id)
{
  const auto * o = m.find_outcome(id);
  if (o == nullptr) throw Error("unknown-outcome", "outcome '" + id + "' is not declared");
  return *o;
}

void require_contexts(const WorldModel & m, const IdSet & contexts)
{
  for (const auto & c : contexts) {
    if (m.find_context(c) == nullptr) throw Error("unknown-context", "context '" + c + "' is not declared");
  }
}

}  // namespace

bool grounding_truth(const OutcomeDecl & outcome, const IdSet & active, const IdSet ** witness)
{
  for (const auto & alt : outcome.groundings) {
    if (alt.empty()) continue;
    const bool holds = std::all_of(alt.begin(), alt.end(), [&](const auto & id) { return active.count(id) > 0; });
    if (holds) {
      if (witness != nullptr) *witness = &alt;
      return true;
    }
  }
  return false;
}

void check_outcome_grounding(const WorldModel & model, const OutcomeDecl & outcome)
{
  if (outcome.groundings.empty()) {
    throw Error("ungrounded-outcome", "outcome '" + outcome.id + "' declares no grounding");
  }
  for (const auto & alt : outcome.groundings) {
    bool participates = false;
    for (const auto & id : alt) {
      const auto * ir = model.find_interaction(id);
      if (ir == nullptr) {
        throw Error("unknown-interaction",
                    "outcome '" + outcome.id + "' grounds on undeclared interaction '" + id + "'");
      }
      if (!model.structurally_available(*ir)) {
        throw Error("ungrounded-outcome", "outcome '" + outcome.id + "' grounds on '" + id +
                                            "', an interaction between entities outside the system");
      }
      participates = true;
    }
    if (!participates) {
      throw Error("ungrounded-outcome",
                  "a grounding alternative of '" + outcome.id + "' has no system participation");
    }
  }
}

OutcomeClass classify_outcome(const WorldModel & model, const OutcomeDecl & outcome)
{
  if (!model.boundary) throw Error("missing-boundary", "model declares no boundary");
  check_outcome_grounding(model, outcome);
  for (const auto & alt : outcome.groundings) {
    for (const auto & id : alt) {
      if (classify_interaction(*model.find_interaction(id), *model.boundary, model) != InteractionClass::Internal) {
        return OutcomeClass::External;
      }
    }
  }
  return OutcomeClass::Internal;
}

OutcomeVerdict evaluate_outcome(const WorldModel & model, const OutcomeDecl & outcome, const ActiveSet & active)
{
  OutcomeVerdict v;
  v.outcome = outcome.id;
  v.context = active.context;
  v.classification = classify_outcome(model, outcome);
  const IdSet * witness = nullptr;
  v.truth = grounding_truth(outcome, active.active, &witness);
  if (witness != nullptr) v.witness = *witness;
  return v;
}

OutcomeVerdict evaluate_outcome(const WorldModel & model, const OutcomeId & outcome, const ContextId & context)
{
  const auto & o = require_outcome(model, outcome);
  return evaluate_outcome(model, o, compute_active_set(model, context));
}

InvarianceResult check_invariance(
  const WorldModel & model, const OutcomeId & outcome, const ContextId & c1, const ContextId & c2)
{
  const auto & o = require_outcome(model, outcome);
  const ActiveSet a1 = compute_active_set(model, c1);
  const ActiveSet a2 = compute_active_set(model, c2);

  InvarianceResult r;
  const IdSet * w1 = nullptr;
  r.truth1 = grounding_truth(o, a1.active, &w1);
  r.truth2 = grounding_truth(o, a2.active, nullptr);
  for (const auto & id : o.grounding_interactions()) {
    const bool in1 = a1.active.count(id) > 0;
    const bool in2 = a2.active.count(id) > 0;
    if (in1 && !in2) r.only_in_first.insert(id);
    if (in2 && !in1) r.only_in_second.insert(id);
  }

  if (c1 == c2) {
    r.status = InvarianceStatus::Invariant;
    if (w1 != nullptr) r.witness = *w1;
    return r;
  }
  for (const auto & alt : o.groundings) {
    if (alt.empty()) continue;
    const bool shared = std::all_of(alt.begin(), alt.end(), [&](const auto & id) {
      return a1.active.count(id) > 0 && a2.active.count(id) > 0;
    });
    if (shared) {
      r.status = InvarianceStatus::Invariant;
      r.witness = alt;
      return r;
    }
  }
  r.status = r.truth1 != r.truth2 ? InvarianceStatus::Differs : InvarianceStatus::NotComparable;
  return r;
}

MinimalSetOptions minimal_set_options_from_env()
{
  MinimalSetOptions opts;
  if (const char * raw = std::getenv("PSWORLD_MAX_SUBSETS")) {
    char * end = nullptr;
    const auto v = std::strtoull(raw, &end, 10);
    if (end != raw && *end == '\0' && v > 0) opts.max_subsets = v;
  }
  return opts;
}

namespace
{

// Activation of each candidate per context, plus the outcome's truth there.
struct Observation
{
  std::vector<bool> active;
  bool truth = false;
};

// J determines truth over the family iff it intersects every "difference
// set" of a context pair whose truth values disagree.
using DiffSet = std::vector<std::size_t>;

bool hits_all(const std::vector<std::uint64_t> & diffs, std::uint64_t mask)
{
  return std::all_of(diffs.begin(), diffs.end(), [&](std::uint64_t d) { return (d & mask) != 0; });
}

bool hits_all(const std::vector<DiffSet> & diffs, const std::vector<bool> & chosen)
{
  return std::all_of(diffs.begin(), diffs.end(), [&](const DiffSet & d) {
    return std::any_of(d.begin(), d.end(), [&](std::size_t i) { return chosen[i]; });
  });
}

}  // namespace

MinimalSetReport find_minimal_sets(
  const WorldModel & model, const OutcomeId & outcome, const IdSet & contexts, const MinimalSetOptions & options)
{
  const auto & o = require_outcome(model, outcome);
  if (contexts.empty()) throw Error("empty-context-family", "minimal-set search needs at least one context");
  require_contexts(model, contexts);

  MinimalSetReport report;
  report.outcome = outcome;
  report.context_family = contexts;
  report.candidates = o.grounding_interactions();
  const std::vector<InteractionId> cand(report.candidates.begin(), report.candidates.end());
  const std::size_t n = cand.size();

  std::vector<Observation> obs;
  for (const auto & c : contexts) {
    const ActiveSet a = compute_active_set(model, c);
    Observation ob;
    for (const auto & id : cand) ob.active.push_back(a.active.count(id) > 0);
    ob.truth = grounding_truth(o, a.active);
    obs.push_back(std::move(ob));
  }

  std::vector<DiffSet> diffs;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t j = i + 1; j < obs.size(); ++j) {
      if (obs[i].truth == obs[j].truth) continue;
      DiffSet d;
      for (std::size_t k = 0; k < n; ++k) {
        if (obs[i].active[k] != obs[j].active[k]) d.push_back(k);
      }
      diffs.push_back(std::move(d));
    }
  }
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  report.constant_outcome = diffs.empty();

  const bool fits = n < 64 && (std::uint64_t{1} << n) <= options.max_subsets;
  if (!fits && !options.heuristic) {
    throw Error("search-too-large", "outcome '" + outcome + "' has " + std::to_string(n) +
                                      " candidate interactions; raise PSWORLD_MAX_SUBSETS, restrict the "
                                      "contexts, or pass --heuristic");
  }

  auto to_ids = [&](auto && is_chosen) {
    IdSet s;
    for (std::size_t k = 0; k < n; ++k) {
      if (is_chosen(k)) s.insert(cand[k]);
    }
    return s;
  };

  if (fits) {
    std::vector<std::uint64_t> masks;
    for (const auto & d : diffs) {
      std::uint64_t m = 0;
      for (auto k : d) m |= std::uint64_t{1} << k;
      masks.push_back(m);
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      if (!hits_all(masks, mask)) continue;
      bool minimal = true;
      for (std::uint64_t rest = mask; rest != 0 && minimal; rest &= rest - 1) {
        if (hits_all(masks, mask & ~(rest & -rest))) minimal = false;
      }
      if (minimal) report.minimal_sets.push_back(to_ids([&](std::size_t k) { return (mask >> k) & 1U; }));
    }
    std::sort(report.minimal_sets.begin(), report.minimal_sets.end(), [](const IdSet & a, const IdSet & b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
  } else {
    std::vector<bool> chosen(n, true);
    for (std::size_t k = 0; k < n; ++k) {
      chosen[k] = false;
      if (!hits_all(diffs, chosen)) chosen[k] = true;
    }
    report.minimal_sets.push_back(to_ids([&](std::size_t k) { return chosen[k]; }));
    report.certified = false;
  }

  for (const auto & s : report.minimal_sets) report.essential.insert(s.begin(), s.end());
  for (const auto & id : report.candidates) {
    if (!report.essential.count(id)) report.nonessential.insert(id);
  }
  return report;
}

namespace
{

// Interactions that could have contributed to activating `target`: every
// active delivery into the function (or relay) that produced it, closed
// transitively. Anything outside this cone cannot influence `target`.
void upstream_cone(const WorldModel & model, const ActiveSet & active, const InteractionId & target, IdSet & cone)
{
  if (!cone.insert(target).second) return;
  const auto it = active.derivation.find(target);
  if (it == active.derivation.end()) return;
  const Activation & step = it->second;
  if (step.rule == Rule::Seed) return;
  const auto * produced = model.find_interaction(target);
  const auto * entity = model.find_entity(step.entity);
  for (const auto & id : active.active) {
    const auto * in = model.find_interaction(id);
    if (in->dest != step.entity) continue;
    bool feeds = false;
    if (step.rule == Rule::Fire) {
      const auto r = resolve_receiver(*in, model);
      feeds = r.function != nullptr && r.function->name == step.function;
    } else {
      for (const auto & rule : entity->relay) {
        if (rule.input == in->flow && rule.interactions.count(produced->id)) feeds = true;
      }
    }
    if (feeds) upstream_cone(model, active, id, cone);
  }
}

}  // namespace

NonessentialReport find_nonessential(
  const WorldModel & model, const IdSet & desired, const IdSet & contexts, const MinimalSetOptions & options)
{
  require_contexts(model, contexts);
  NonessentialReport report;
  report.vacuous = desired.empty();

  IdSet essential;
  for (const auto & o : desired) {
    report.per_outcome.push_back(find_minimal_sets(model, o, contexts, options));
    const auto & e = report.per_outcome.back().essential;
    essential.insert(e.begin(), e.end());
  }
  for (const auto & ir : model.interactions) {
    if (!essential.count(ir.id)) report.nonessential.insert(ir.id);
  }

  for (const auto & o : model.outcomes) {
    const auto g = o.grounding_interactions();
    report.activation_support.insert(g.begin(), g.end());
  }
  // The cone walk keeps its own visited set: grounding references are
  // already in the support and must not cut the walk short.
  for (const auto & c : contexts) {
    const ActiveSet a = compute_active_set(model, c);
    IdSet cone;
    for (const auto & o : desired) {
      for (const auto & id : require_outcome(model, o).grounding_interactions()) {
        if (a.active.count(id)) upstream_cone(model, a, id, cone);
      }
    }
    report.activation_support.insert(cone.begin(), cone.end());
  }
  for (const auto & id : report.nonessential) {
    if (!report.activation_support.count(id)) report.certified.insert(id);
  }
  return report;
}

WorldModel remove_interactions(const WorldModel & model, const IdSet & removable)
{
  WorldModel out = model;
  std::erase_if(out.interactions, [&](const Interaction & ir) { return removable.count(ir.id) > 0; });
  for (auto & c : out.contexts) {
    std::erase_if(c.emissions, [&](const Emission & e) { return removable.count(e.via) > 0; });
  }
  for (auto & e : out.entities) {
    std::erase_if(e.emits, [&](const EmitDecl & em) { return removable.count(em.via) > 0; });
    for (auto & r : e.relay) {
      std::erase_if(r.interactions, [&](const auto & id) { return removable.count(id) > 0; });
    }
    std::erase_if(e.relay, [](const RelayRule & r) { return r.interactions.empty(); });
  }
  return out;
}

WorldModel reduce_model(
  const WorldModel & model, const IdSet & removable, const IdSet & desired, const IdSet & contexts,
  const MinimalSetOptions & options)
{
  if (removable.empty()) return model;
  require_contexts(model, contexts);
  for (const auto & id : removable) {
    if (model.find_interaction(id) == nullptr) {
      throw Error("unknown-interaction", "interaction '" + id + "' is not declared");
    }
  }
  for (const auto & o : desired) (void)require_outcome(model, o);

  WorldModel reduced = remove_interactions(model, removable);
  for (const auto & c : contexts) {
    const ActiveSet before = compute_active_set(model, c);
    const ActiveSet after = compute_active_set(reduced, c);
    for (const auto & o : desired) {
      const auto & decl = require_outcome(model, o);
      const bool t0 = grounding_truth(decl, before.active);
      const bool t1 = grounding_truth(decl, after.active);
      if (t0 != t1) {
        throw Error("not-removable", "removing " + join(removable) + " changes '" + o + "' under '" + c +
                                       "' from " + (t0 ? "TRUE" : "FALSE") + " to " + (t1 ? "TRUE" : "FALSE"));
      }
    }
  }

  const auto cert = find_nonessential(model, desired, contexts, options);
  IdSet rejected;
  for (const auto & id : removable) {
    if (!cert.certified.count(id)) rejected.insert(id);
  }
  if (!rejected.empty()) {
    throw Error("not-certified", "interactions " + join(rejected) + " are not certified non-essential");
  }

  reduced.provenance.lines.push_back("reduced: removed " + join(removable) + " preserving " + join(desired) +
                                     " over " + join(contexts));
  return reduced;
}

}  // namespace psworld
