#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psworld/activation.hpp"
#include "psworld/classify.hpp"
#include "psworld/model.hpp"

namespace psworld
{

enum class OutcomeClass { Internal, External };

[[nodiscard]] std::string to_string(OutcomeClass c);

struct OutcomeVerdict
{
  OutcomeId outcome;
  ContextId context;
  bool truth = false;
  std::optional<IdSet> witness;  // the satisfied grounding alternative
  OutcomeClass classification = OutcomeClass::External;
};

/// TRUE iff some grounding alternative lies wholly in IR*.
[[nodiscard]] bool grounding_truth(const OutcomeDecl & outcome, const IdSet & active,
                                   const IdSet ** witness = nullptr);

/// Internal iff every grounding interaction is Internal relative to the
/// model's boundary; any other grounding is External.
/// Throws `missing-boundary`, `ungrounded-outcome`.
[[nodiscard]] OutcomeClass classify_outcome(const WorldModel & model, const OutcomeDecl & outcome);

/// Checks SysSol participation of every grounding alternative and that no
/// referenced interaction is missing or external to the system. Throws
/// `ungrounded-outcome` / `unknown-interaction`.
void check_outcome_grounding(const WorldModel & model, const OutcomeDecl & outcome);

[[nodiscard]] OutcomeVerdict evaluate_outcome(
  const WorldModel & model, const OutcomeId & outcome, const ContextId & context);

/// Same as above, reusing an already computed active set.
[[nodiscard]] OutcomeVerdict evaluate_outcome(
  const WorldModel & model, const OutcomeDecl & outcome, const ActiveSet & active);

enum class InvarianceStatus { Invariant, NotComparable, Differs };

[[nodiscard]] std::string to_string(InvarianceStatus s);

struct InvarianceResult
{
  InvarianceStatus status = InvarianceStatus::NotComparable;
  IdSet witness;         // shared grounding set when invariant
  bool truth1 = false;
  bool truth2 = false;
  IdSet only_in_first;   // grounding interactions active only under c1
  IdSet only_in_second;
};

[[nodiscard]] InvarianceResult check_invariance(
  const WorldModel & model, const OutcomeId & outcome, const ContextId & c1, const ContextId & c2);

inline constexpr std::uint64_t default_max_subsets = std::uint64_t{1} << 20;

struct MinimalSetOptions
{
  std::uint64_t max_subsets = default_max_subsets;  // exhaustive search requires 2^n <= this
  bool heuristic = false;  // greedy shrink above the cap; result not certified
};

/// Reads PSWORLD_MAX_SUBSETS when set.
[[nodiscard]] MinimalSetOptions minimal_set_options_from_env();

struct MinimalSetReport
{
  OutcomeId outcome;
  IdSet context_family;
  IdSet candidates;
  std::vector<IdSet> minimal_sets;
  IdSet essential;
  IdSet nonessential;
  bool constant_outcome = false;
  bool certified = true;
};

/// All inclusion-minimal J over the grounding interactions such that equal
/// activation of J across two contexts of the family forces equal truth.
/// Throws `search-too-large` above the cap unless heuristic mode is on.
[[nodiscard]] MinimalSetReport find_minimal_sets(
  const WorldModel & model, const OutcomeId & outcome, const IdSet & contexts,
  const MinimalSetOptions & options = {});

struct NonessentialReport
{
  IdSet nonessential;          // in no minimal set of any desired outcome
  IdSet activation_support;    // grounding-referenced or upstream of an active grounding interaction
  IdSet certified;             // nonessential minus support: removable without changing any verdict
  bool vacuous = false;
  std::vector<MinimalSetReport> per_outcome;
};

[[nodiscard]] NonessentialReport find_nonessential(
  const WorldModel & model, const IdSet & desired, const IdSet & contexts,
  const MinimalSetOptions & options = {});

/// Removes the interactions after checking they are certified and that
/// every desired outcome keeps its truth in every context. Throws
/// `not-removable` (with the violating pair) or `not-certified`.
[[nodiscard]] WorldModel reduce_model(
  const WorldModel & model, const IdSet & removable, const IdSet & desired, const IdSet & contexts,
  const MinimalSetOptions & options = {});

/// Removal without any certification; used by the verification step.
[[nodiscard]] WorldModel remove_interactions(const WorldModel & model, const IdSet & removable);

}  // namespace psworld
