#include <doctest.h>

#include <cstdlib>

#include "psworld/outcome.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace psworld;
using namespace psworld::testing;

namespace
{

// `out` is produced only when both p and q arrive, so it is active only
// when v_p is; the converse does not hold.
const char * const chain = R"(
entity f kind internal {
  function join domain {p, q} codomain {r}
    map p -> {r}
    firing all
}
entity x kind external {}
entity v kind environment { emits p via v_p emits q via v_q }
interaction v_p: v -> f flow p
interaction v_q: v -> f flow q
interaction out: f -> x flow r
boundary internal {f}
context none {}
context one { emit v flow p on v_p }
context both { emit v flow p on v_p emit v flow q on v_q }
stakeholder s goal g "r reaches x"
outcome o desired for {g} grounding {v_p, out}
)";

std::set<IdSet> as_set(const std::vector<IdSet> & v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_SUITE("outcome-engine")
{
  TEST_CASE("worked-example verdicts")
  {
    const auto m = load_corpus("traffic.psw");
    const auto v = evaluate_outcome(m, "oc_1_2", "OpsC_1");
    CHECK(v.truth);
    CHECK(v.classification == OutcomeClass::External);
    REQUIRE(v.witness);
    CHECK(*v.witness == IdSet{"light_to_vehicles"});

    const auto internal = evaluate_outcome(m, "oc_1_4", "OpsC_2");
    CHECK(internal.truth);
    CHECK(internal.classification == OutcomeClass::Internal);

    const auto night = evaluate_outcome(m, "oc_2_1", "OpsC_2");
    CHECK_FALSE(night.truth);
    CHECK_FALSE(night.witness);
  }

  TEST_CASE("verdicts agree with the oracle on the corpus")
  {
    const auto m = load_corpus("traffic.psw");
    for (const auto & o : m.outcomes) {
      for (const auto & c : m.contexts) {
        const auto v = evaluate_outcome(m, o.id, c.id);
        CHECK(v.truth == oracle::truth(o, oracle::active_set(m, c)));
        CHECK((v.classification == OutcomeClass::Internal) == oracle::outcome_internal(m, o));
      }
    }
  }

  TEST_CASE("an outcome grounded only outside the system is ungrounded")
  {
    auto m = load_corpus("traffic.psw");
    m.outcomes.push_back({"crowd", "", {{"vehicles_to_pedestrians"}}, {}, {}});
    CHECK(error_code([&] { (void)evaluate_outcome(m, "crowd", "OpsC_1"); }) == "ungrounded-outcome");
    m.outcomes.push_back({"ghost", "", {{"nope"}}, {}, {}});
    CHECK(error_code([&] { check_outcome_grounding(m, *m.find_outcome("ghost")); }) == "unknown-interaction");
    m.outcomes.push_back({"empty", "", {}, {}, {}});
    CHECK(error_code([&] { (void)classify_outcome(m, *m.find_outcome("empty")); }) == "ungrounded-outcome");
    CHECK(error_code([&] { (void)evaluate_outcome(m, "nope", "OpsC_1"); }) == "unknown-outcome");
    CHECK(error_code([&] { (void)evaluate_outcome(m, "oc_1_1", "nope"); }) == "unknown-context");
    m.boundary.reset();
    CHECK(error_code([&] { (void)classify_outcome(m, *m.find_outcome("oc_1_1")); }) == "missing-boundary");
  }

  TEST_CASE("grounding truth is a disjunction of conjunctions")
  {
    const OutcomeDecl o{"o", "", {{"a", "b"}, {"c"}}, {}, {}};
    const IdSet * witness = nullptr;
    CHECK_FALSE(grounding_truth(o, {"a"}));
    CHECK(grounding_truth(o, {"a", "b"}, &witness));
    CHECK(*witness == IdSet{"a", "b"});
    CHECK(grounding_truth(o, {"c"}));
    CHECK_FALSE(grounding_truth({"e", "", {{}}, {}, {}}, {"a"}));
  }

  TEST_CASE("invariance on the worked example")
  {
    const auto m = load_corpus("traffic.psw");
    const auto inv = check_invariance(m, "oc_1_1", "OpsC_1", "OpsC_2");
    CHECK(inv.status == InvarianceStatus::Invariant);
    CHECK(inv.truth1);
    CHECK(inv.truth2);
    CHECK(inv.witness == IdSet{"clock_tick", "light_to_vehicles"});

    CHECK(check_invariance(m, "oc_2_2", "OpsC_1", "OpsC_1").status == InvarianceStatus::Invariant);

    const auto diff = check_invariance(m, "oc_2_1", "OpsC_1", "OpsC_2");
    CHECK(diff.status == InvarianceStatus::Differs);
    CHECK(diff.truth1);
    CHECK_FALSE(diff.truth2);
    CHECK(diff.only_in_first == IdSet{"env_day"});
  }

  TEST_CASE("equal truth without a shared active grounding is not comparable")
  {
    const auto m = model_of(chain);
    const auto r = check_invariance(m, "o", "none", "one");
    CHECK(r.status == InvarianceStatus::NotComparable);
    CHECK_FALSE(r.truth1);
    CHECK_FALSE(r.truth2);
  }

  TEST_CASE("a grounding member implied by another is dropped from the minimal set")
  {
    const auto m = model_of(chain);
    const auto rep = find_minimal_sets(m, "o", m.context_ids());
    CHECK(as_set(rep.minimal_sets) == std::set<IdSet>{{"out"}});
    CHECK(as_set(rep.minimal_sets) == oracle::minimal_sets(m, *m.find_outcome("o"), m.context_ids()));
    CHECK(rep.essential == IdSet{"out"});
    CHECK(rep.nonessential == IdSet{"v_p"});
    CHECK(rep.candidates == IdSet{"out", "v_p"});
    CHECK_FALSE(rep.constant_outcome);
    CHECK(rep.certified);
  }

  TEST_CASE("redundant groundings give incomparable minimal sets")
  {
    const auto m = load_corpus("fixtures/redundant-grounding.psw");
    const auto rep = find_minimal_sets(m, "detected", m.context_ids());
    CHECK(as_set(rep.minimal_sets) == std::set<IdSet>{{"path_a"}, {"path_b"}});
    CHECK(as_set(rep.minimal_sets) == oracle::minimal_sets(m, *m.find_outcome("detected"), m.context_ids()));
  }

  TEST_CASE("a constant outcome is determined by the empty set")
  {
    const auto m = load_corpus("traffic.psw");
    const auto rep = find_minimal_sets(m, "oc_1_1", m.context_ids());
    CHECK(rep.constant_outcome);
    CHECK(rep.minimal_sets == std::vector<IdSet>{IdSet{}});
    CHECK(rep.essential.empty());
  }

  TEST_CASE("minimal-set errors and the search cap")
  {
    const auto m = model_of(chain);
    CHECK(error_code([&] { (void)find_minimal_sets(m, "o", {}); }) == "empty-context-family");
    CHECK(error_code([&] { (void)find_minimal_sets(m, "o", {"nowhere"}); }) == "unknown-context");
    CHECK(error_code([&] { (void)find_minimal_sets(m, "nope", m.context_ids()); }) == "unknown-outcome");

    MinimalSetOptions tight;
    tight.max_subsets = 2;
    CHECK(error_code([&] { (void)find_minimal_sets(m, "o", m.context_ids(), tight); }) == "search-too-large");
    tight.heuristic = true;
    const auto rep = find_minimal_sets(m, "o", m.context_ids(), tight);
    CHECK_FALSE(rep.certified);
    const auto rows = oracle::rows(m, *m.find_outcome("o"), m.context_ids());
    for (const auto & s : rep.minimal_sets) CHECK(oracle::determines(rows, s));
  }

  TEST_CASE("the cap can be set from the environment")
  {
    ::setenv("PSWORLD_MAX_SUBSETS", "64", 1);
    CHECK(minimal_set_options_from_env().max_subsets == 64);
    ::unsetenv("PSWORLD_MAX_SUBSETS");
    CHECK(minimal_set_options_from_env().max_subsets == default_max_subsets);
  }

  TEST_CASE("heuristic sets always determine truth")
  {
    Rng rng(41);
    MinimalSetOptions greedy;
    greedy.max_subsets = 1;
    greedy.heuristic = true;
    for (int i = 0; i < 200; ++i) {
      const auto m = random_model(rng);
      for (const auto & o : m.outcomes) {
        const auto rows = oracle::rows(m, o, m.context_ids());
        for (const auto & s : find_minimal_sets(m, o.id, m.context_ids(), greedy).minimal_sets) {
          CHECK(oracle::determines(rows, s));
        }
      }
    }
  }

  TEST_CASE("the maintenance link is non-essential and certified")
  {
    const auto m = load_corpus("fixtures/traffic-maintenance.psw");
    const auto rep = find_nonessential(m, m.desired_outcome_ids(), m.context_ids());
    CHECK(rep.nonessential.count("maintenance_link"));
    CHECK(rep.certified.count("maintenance_link"));
    CHECK_FALSE(rep.certified.count("clock_tick"));
    CHECK_FALSE(rep.vacuous);
    CHECK(rep.per_outcome.size() == m.desired_outcome_ids().size());
  }

  TEST_CASE("interactions that each appear in a minimal set leave nothing non-essential")
  {
    const auto m = model_of(R"(
entity f kind internal { function fn domain {a} codomain {b} map a -> {b} }
entity x kind external {}
entity v kind environment { emits a via v_f }
interaction v_f: v -> f flow a
interaction f_x: f -> x flow b
boundary internal {f}
context off {}
context on { emit v flow a on v_f }
stakeholder s goal g "b reaches x"
outcome o desired for {g} grounding {v_f} grounding {f_x}
)");
    const auto rep = find_nonessential(m, {"o"}, m.context_ids());
    CHECK(rep.nonessential.empty());
    CHECK(rep.certified.empty());
  }

  TEST_CASE("no desired outcomes makes everything non-essential")
  {
    const auto m = load_corpus("traffic.psw");
    const auto rep = find_nonessential(m, {}, m.context_ids());
    CHECK(rep.vacuous);
    CHECK(rep.nonessential == m.interaction_ids());
  }

  TEST_CASE("removing the maintenance link keeps every verdict")
  {
    const auto m = load_corpus("fixtures/traffic-maintenance.psw");
    const auto reduced = reduce_model(m, {"maintenance_link"}, m.desired_outcome_ids(), m.context_ids());
    CHECK(reduced.find_interaction("maintenance_link") == nullptr);
    for (const auto & o : m.outcomes) {
      for (const auto & c : m.contexts) {
        CHECK(evaluate_outcome(m, o.id, c.id).truth == evaluate_outcome(reduced, o.id, c.id).truth);
      }
    }
    REQUIRE(reduced.provenance.lines.size() == 1);
    CHECK(reduced.provenance.lines.front().find("removed {maintenance_link}") != std::string::npos);
  }

  TEST_CASE("reduction refusals")
  {
    const auto m = load_corpus("traffic.psw");
    const auto desired = m.desired_outcome_ids();
    const auto contexts = m.context_ids();
    CHECK(reduce_model(m, {}, desired, contexts) == m);

    try {
      (void)reduce_model(m, {"clock_tick"}, desired, contexts);
      FAIL("expected not-removable");
    } catch (const Error & e) {
      CHECK(e.code() == "not-removable");
      CHECK(std::string(e.what()).find("oc_1_1") != std::string::npos);
      CHECK(std::string(e.what()).find("OpsC_1") != std::string::npos);
    }
    // Removing the link changes no desired verdict, but an outcome is grounded on it.
    auto grounded = load_corpus("fixtures/traffic-maintenance.psw");
    grounded.outcomes.push_back({"diagnosed", "", {{"maintenance_link"}}, {}, {}});
    CHECK(error_code([&] { (void)reduce_model(grounded, {"maintenance_link"}, desired, contexts); }) ==
          "not-certified");
    CHECK(error_code([&] { (void)reduce_model(m, {"nope"}, desired, contexts); }) == "unknown-interaction");
  }

  TEST_CASE("removal drops every reference to the removed interaction")
  {
    const auto m = model_of(R"(
entity a kind internal { function core domain {s} codomain {r} map s -> {r} }
entity b kind external { relay r -> {b_a} }
entity x kind environment { emits s via x_a }
interaction x_a: x -> a flow s
interaction a_b: a -> b flow r
interaction b_a: b -> a flow s
boundary internal {a}
context on { emit x flow s on x_a }
)");
    const auto out = remove_interactions(m, {"b_a", "x_a"});
    CHECK(out.interactions.size() == 1);
    CHECK(out.find_entity("b")->relay.empty());
    CHECK(out.find_entity("x")->emits.empty());
    CHECK(out.find_context("on")->emissions.empty());
  }
}
