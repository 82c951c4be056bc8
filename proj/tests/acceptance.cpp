// Acceptance run: one pass/fail line per criterion; exits nonzero when any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "psworld/activation.hpp"
#include "psworld/boundary.hpp"
#include "psworld/classify.hpp"
#include "psworld/dsl.hpp"
#include "psworld/outcome.hpp"
#include "psworld/report.hpp"
#include "psworld/session.hpp"
#include "psworld/sufficiency.hpp"
#include "psworld/validate.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace
{

using namespace psworld;
using namespace psworld::testing;

struct Outcome
{
  bool pass = true;
  std::ostringstream why;

  void require(bool ok, const std::string & what)
  {
    if (!ok && pass) why << what;
    pass = pass && ok;
  }
};

using Criterion = std::function<void(Outcome &)>;

constexpr std::uint64_t seed = 0x5eed'2024ULL;

const OutcomeDecl & outcome(const WorldModel & m, const OutcomeId & id) { return *m.find_outcome(id); }

void corpus_reproduction(Outcome & r)
{
  const auto start = std::chrono::steady_clock::now();
  const auto m = load_corpus("traffic.psw");
  r.require(!has_errors(validate_model(m)), "corpus does not validate");

  const std::map<EntityId, EntityKind> kinds = {{"traffic_light", EntityKind::InternalFunction},
                                                {"clock", EntityKind::InternalFunction},
                                                {"vehicles", EntityKind::ExternalSystem},
                                                {"pedestrians", EntityKind::ExternalSystem},
                                                {"day_night", EntityKind::Environment}};
  r.require(m.entities.size() == kinds.size(), "entity count");
  for (const auto & [id, k] : kinds) {
    const auto * e = m.find_entity(id);
    r.require(e != nullptr && e->kind == k, "entity " + id);
  }
  auto states = [&](const EntityId & id) {
    const auto * e = m.find_entity(id);
    if (e == nullptr || e->functions.empty() || !e->functions.front().states) return IdSet{};
    const auto & s = e->functions.front().states->states;
    return IdSet(s.begin(), s.end());
  };
  r.require(states("traffic_light") == IdSet{"Red", "Yellow", "Green"}, "traffic light states");
  r.require(states("vehicles") == IdSet{"Moving", "Stop"}, "vehicle states");
  r.require(states("pedestrians") == IdSet{"Wait", "Walk"}, "pedestrian states");
  r.require(states("clock") == IdSet{"Peak", "Night"}, "clock states");
  auto tau = [&](const EntityId & id, const std::string & s, const std::string & in) -> std::string {
    const auto * n = m.find_entity(id)->functions.front().states->next(s, in);
    return n == nullptr ? "" : *n;
  };
  r.require(tau("traffic_light", "Red", "timer_trigger") == "Green", "tau1");
  r.require(tau("clock", "Peak", "T_Night") == "Night", "tau4");
  r.require(m.context_ids() == IdSet{"OpsC_1", "OpsC_2"}, "contexts");
  for (const auto * id : {"oc_1_1", "oc_1_2", "oc_1_3", "oc_1_4"}) {
    const auto * o = m.find_outcome(id);
    r.require(o != nullptr, std::string("missing ") + id);
    if (o == nullptr) continue;
    const auto expected = std::string(id) == "oc_1_4" ? OutcomeClass::Internal : OutcomeClass::External;
    r.require(classify_outcome(m, *o) == expected, std::string("classification of ") + id);
  }

  r.require(serialize_model(m) == read_text(corpus_path("golden/traffic.psw")), "golden serialization");
  r.require(report::text(outcome_matrix(m, m.context_ids())) == read_text(corpus_path("golden/traffic.outcomes.txt")),
            "golden outcome matrix");
  r.require(report::text(classify_all(m)) == read_text(corpus_path("golden/traffic.classify.txt")),
            "golden classification");
  const auto elapsed = std::chrono::steady_clock::now() - start;
  r.require(elapsed < std::chrono::seconds(1), "slower than 1 s");
}

void partition_law(Outcome & r)
{
  Rng rng(seed);
  for (int i = 0; i < 1000; ++i) {
    const auto m = random_model(rng);
    const auto b = random_boundary(rng, m);
    const auto c = classify_all(m, b);
    r.require(c.size() == m.interactions.size(), "classification does not cover IR");
    const auto sizes = partition_sizes(c);
    r.require(sizes[0] + sizes[1] + sizes[2] + sizes[3] == m.interactions.size(), "class sizes do not sum to |IR|");
    for (const auto & ir : m.interactions) {
      auto it = c.find(ir.id);
      r.require(it != c.end() && static_cast<int>(it->second) == oracle::interaction_class(ir, b),
                "class of " + ir.id + " disagrees with the oracle");
    }
  }
}

/// Replays one derivation step against the raw model.
bool replayable(const WorldModel & m, const ContextDecl & ctx, const ActiveSet & a, const InteractionId & id)
{
  const auto & step = a.derivation.at(id);
  const auto * ir = m.find_interaction(id);
  if (ir == nullptr || ir->source != step.entity) return false;
  for (const auto & p : step.premises) {
    if (!a.active.count(p) || a.derivation.at(p).layer >= step.layer) return false;
  }
  switch (step.rule) {
    case Rule::Seed:
      for (const auto & em : ctx.emissions) {
        if (em.via == id && em.flow == ir->flow) return step.premises.empty();
      }
      return false;
    case Rule::Fire: {
      const auto * f = m.find_entity(step.entity)->function(step.function);
      if (f == nullptr || step.premises.empty()) return false;
      IdSet inputs;
      for (const auto & p : step.premises) {
        const auto * in = m.find_interaction(p);
        if (in->dest != step.entity) return false;
        inputs.insert(in->flow);
      }
      if (f->firing == Firing::All && inputs != f->domain) return false;
      for (const auto & in : inputs) {
        auto it = f->output_map.find(in);
        if (it != f->output_map.end() && it->second.count(ir->flow)) return true;
      }
      return false;
    }
    case Rule::Relay: {
      if (step.premises.size() != 1) return false;
      const auto * in = m.find_interaction(step.premises.front());
      for (const auto & rule : m.find_entity(step.entity)->relay) {
        if (rule.input == in->flow && rule.interactions.count(id) && in->dest == step.entity) return true;
      }
      return false;
    }
  }
  return false;
}

void activation_soundness(Outcome & r)
{
  const auto corpus = load_corpus("traffic.psw");
  const auto c1 = compute_active_set(corpus, "OpsC_1");
  r.require(c1.active.size() < corpus.interactions.size(), "no strict IR* in the corpus fixture");

  Rng rng(seed + 3);
  int cases = 0;
  while (cases < 1000) {
    const auto m = random_model(rng);
    std::vector<ContextId> schedule;
    for (const auto & ctx : m.contexts) {
      ++cases;
      schedule.push_back(ctx.id);
      const auto a = compute_active_set(m, ctx);
      r.require(a.active == oracle::active_set(m, ctx), "IR* disagrees with the naive fixed point");
      for (const auto & em : ctx.emissions) {
        const auto * ir = m.find_interaction(em.via);
        if (oracle::admissible(m, *ir)) r.require(a.active.count(em.via) > 0, "admissible emission not active");
      }
      for (const auto & id : a.active) {
        r.require(m.find_interaction(id) != nullptr, "IR* not within IR");
        r.require(a.derivation.count(id) && replayable(m, ctx, a, id), "derivation of " + id + " does not replay");
      }
    }
    std::shuffle(schedule.begin(), schedule.end(), rng);
    const auto trace = simulate(m, schedule);
    for (const auto & s : trace.steps) {
      const auto active = oracle::active_set(m, s.context);
      const auto * ir = m.find_interaction(s.via);
      const auto * f = m.find_entity(s.entity)->function(s.function);
      const bool ok = active.count(s.via) && ir->dest == s.entity && ir->flow == s.input && f != nullptr &&
                      f->domain.count(s.input) && f->states && f->states->next(s.before, s.input) &&
                      *f->states->next(s.before, s.input) == s.after;
      r.require(ok, "transition without an active admissible delivery");
    }
  }
}

void invariance(Outcome & r)
{
  Rng rng(seed + 4);
  int invariant = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto m = random_model(rng);
    const auto & o = pick(rng, m.outcomes);
    const auto & c1 = pick(rng, m.contexts).id;
    const auto & c2 = pick(rng, m.contexts).id;
    const auto res = check_invariance(m, o.id, c1, c2);
    const bool t1 = oracle::truth(o, oracle::active_set(m, c1));
    const bool t2 = oracle::truth(o, oracle::active_set(m, c2));
    if (res.status == InvarianceStatus::Invariant) {
      ++invariant;
      r.require(t1 == t2, "invariant verdict with differing truth");
    }
    if (res.status == InvarianceStatus::Differs) r.require(t1 != t2, "differs verdict with equal truth");
  }
  r.require(invariant > 50, "too few invariant cases to be meaningful");
}

void minimal_sets(Outcome & r)
{
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed + 5);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto m = random_model(rng);
    for (const auto & o : m.outcomes) {
      if (o.grounding_interactions().size() > 12) continue;
      const auto rep = find_minimal_sets(m, o.id, m.context_ids());
      const auto expected = oracle::minimal_sets(m, o, m.context_ids());
      const std::set<IdSet> got(rep.minimal_sets.begin(), rep.minimal_sets.end());
      r.require(got == expected, "minimal sets of " + o.id + " disagree with brute force");
      r.require(rep.certified, "exhaustive search not certified");
      ++checked;
    }
  }
  const auto m = load_corpus("fixtures/redundant-grounding.psw");
  const auto rep = find_minimal_sets(m, "detected", m.context_ids());
  int incomparable = 0;
  for (std::size_t a = 0; a < rep.minimal_sets.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.minimal_sets.size(); ++b) {
      const auto & x = rep.minimal_sets[a];
      const auto & y = rep.minimal_sets[b];
      if (!std::includes(x.begin(), x.end(), y.begin(), y.end()) &&
          !std::includes(y.begin(), y.end(), x.begin(), x.end())) {
        ++incomparable;
      }
    }
  }
  r.require(incomparable >= 1, "redundant-grounding fixture lacks two incomparable minimal sets");
  r.require(std::chrono::steady_clock::now() - start < std::chrono::seconds(30), "slower than 30 s");
}

int check_reduction(Outcome & r, const WorldModel & m)
{
  const auto desired = m.desired_outcome_ids();
  const auto contexts = m.context_ids();
  const auto rep = find_nonessential(m, desired, contexts);
  if (rep.certified.empty()) return 0;
  const auto reduced = reduce_model(m, rep.certified, desired, contexts);
  for (const auto & id : desired) {
    for (const auto & c : contexts) {
      const bool before = oracle::truth(*m.find_outcome(id), oracle::active_set(m, c));
      const bool after = oracle::truth(*reduced.find_outcome(id), oracle::active_set(reduced, c));
      r.require(before == after, "reduction changed " + id + " under " + c);
    }
  }
  return 1;
}

void safe_reduction(Outcome & r)
{
  int reduced = check_reduction(r, load_corpus("traffic.psw"));
  Rng rng(seed + 6);
  for (int i = 0; i < 100; ++i) reduced += check_reduction(r, random_model(rng));
  r.require(reduced >= 10, "too few models had anything to remove");
}

void boundary_independence(Outcome & r)
{
  Rng rng(seed + 7);
  for (int i = 0; i < 1000; ++i) {
    const auto m = random_model(rng);
    const auto [after, plan] = rescope(m, random_scope(rng, m));
    for (const auto & o : m.outcomes) {
      for (const auto & c : m.contexts) {
        r.require(oracle::truth(o, oracle::active_set(m, c)) == oracle::truth(o, oracle::active_set(after, c)),
                  "truth changed by rescope");
      }
    }
    IdSet all;
    for (const auto & o : m.outcomes) all.insert(o.id);
    r.require(verify_boundary_independence(m, after, all, m.context_ids()).defects == 0, "verification reports defects");
  }
  const auto corpus = load_corpus("traffic.psw");
  const auto [narrow, plan] = rescope(corpus, {"traffic_light"});
  r.require(classify_outcome(corpus, outcome(corpus, "oc_1_4")) == OutcomeClass::Internal, "oc_1_4 not internal before");
  r.require(classify_outcome(narrow, outcome(narrow, "oc_1_4")) == OutcomeClass::External, "oc_1_4 did not flip");
}

/// Deletes one construct for `target`, returns the model.
WorldModel mutate(const WorldModel & m, const OutcomeId & target, Construct k)
{
  WorldModel out = m;
  const auto & first = *outcome(m, target).groundings.front().begin();
  const InteractionId victim = first;
  switch (k) {
    case Construct::Boundary: out.boundary.reset(); break;
    case Construct::Classification:
      std::erase_if(out.interactions, [&](const Interaction & ir) { return ir.id == victim; });
      break;
    case Construct::Admissibility: out.find_entity(m.find_interaction(victim)->dest)->functions.clear(); break;
    case Construct::Grounding: out.find_outcome(target)->groundings.clear(); break;
  }
  return out;
}

void sufficiency_biconditional(Outcome & r)
{
  const auto m = load_corpus("traffic.psw");
  const auto desired = m.desired_outcome_ids();
  const auto contexts = m.context_ids();
  r.require(audit_sufficiency(m, desired, contexts).sufficient, "corpus not sufficient");
  for (const auto & target : desired) {
    for (const auto k : {Construct::Boundary, Construct::Classification, Construct::Admissibility, Construct::Grounding}) {
      const auto broken = mutate(m, target, k);
      const auto rep = audit_sufficiency(broken, desired, contexts);
      const std::string label = target + "/" + to_string(k);
      r.require(!rep.sufficient, label + " did not break sufficiency");
      for (const auto & cell : rep.missing_cells()) r.require(cell.construct == k, label + " broke another construct");
      for (const auto & c : contexts) {
        const auto * cell = rep.cell(target, c, k);
        r.require(cell != nullptr && !cell->present, label + " cell not missing");
      }
      r.require(audit_sufficiency(m, desired, contexts).sufficient, label + " restore did not recover");
    }
  }
}

void corollary_fixture(Outcome & r)
{
  const auto m = load_corpus("traffic.psw");
  OutcomeDecl pollution;
  pollution.id = "pollution-reduced";
  pollution.description = "vehicle emissions are reduced";
  pollution.supports = {"g_12"};
  const auto impact = impact_of_new_outcome(m, pollution, m.context_ids());
  r.require(impact.before.sufficient, "corpus not sufficient before");
  r.require(!impact.after.sufficient, "adding pollution-reduced did not break sufficiency");
  r.require(!impact.deltas.empty(), "no delta reported");
  for (const auto & d : impact.deltas) {
    r.require(d.construct == Construct::Grounding && d.outcome == "pollution-reduced", "delta outside grounding");
  }
  const auto fixture = load_corpus("fixtures/traffic-pollution.psw");
  r.require(!audit_sufficiency(fixture, fixture.desired_outcome_ids(), fixture.context_ids()).sufficient,
            "fixture file audits sufficient");
}

void round_trip(Outcome & r)
{
  auto check = [&](const WorldModel & m, const std::string & label) {
    const auto text = serialize_model(m);
    const auto back = parse_model(text, label);
    r.require(back.ok() && *back.model == m && serialize_model(*back.model) == text, label + " does not round-trip");
  };
  check(load_corpus("traffic.psw"), "corpus");
  Rng rng(seed + 10);
  for (int i = 0; i < 500; ++i) check(random_model(rng), "random model " + std::to_string(i));

  Session s;
  std::istringstream script(read_text(corpus_path("session-v.txt")));
  for (std::string line; std::getline(script, line);) (void)s.feed(line);
  const auto golden = read_text(corpus_path("golden/session-v.psw"));
  r.require(serialize_model(s.model()) == golden, "REPL session differs from golden");
  r.require(serialize_model(Session::replay(s.initial(), s.history())) == golden, "history replay differs");
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, Criterion>> criteria = {
    {"corpus reproduction", corpus_reproduction},
    {"partition law", partition_law},
    {"activation soundness and strictness", activation_soundness},
    {"invariance", invariance},
    {"minimal sets", minimal_sets},
    {"safe reduction", safe_reduction},
    {"boundary independence", boundary_independence},
    {"sufficiency biconditional", sufficiency_biconditional},
    {"new outcome breaks sufficiency", corollary_fixture},
    {"round-trip", round_trip},
  };
  int failures = 0;
  int n = 0;
  for (const auto & [name, run] : criteria) {
    Outcome r;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(r);
    } catch (const std::exception & e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << ++n << ". " << name << " (" << ms << " ms)";
    if (!r.pass) std::cout << ": " << r.why.str();
    std::cout << '\n';
    failures += r.pass ? 0 : 1;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}
