#pragma once

#include <array>
#include <map>
#include <string>

#include "psworld/model.hpp"

namespace psworld
{

enum class InteractionClass { Internal, Inbound, Outbound, External };

[[nodiscard]] std::string to_string(InteractionClass c);

/// Internal iff both endpoints internal, Inbound iff only the destination is,
/// Outbound iff only the source is, External otherwise. Throws
/// `unresolved-endpoint` when an endpoint is not in the boundary's universe.
[[nodiscard]] InteractionClass classify_interaction(
  const Interaction & ir, const Boundary & boundary, const WorldModel & universe);

using Classification = std::map<InteractionId, InteractionClass>;

/// Throws `missing-boundary` when the model has no boundary.
[[nodiscard]] Classification classify_all(const WorldModel & model);
[[nodiscard]] Classification classify_all(const WorldModel & model, const Boundary & boundary);

/// Sizes of the four class-sets in declaration order of the enum.
[[nodiscard]] std::array<std::size_t, 4> partition_sizes(const Classification & c);

enum class ReceiverStatus {
  NoFunctions,  // destination declares no function: nothing to check
  Resolved,
  Inadmissible, // flow lies in no candidate's domain
  Ambiguous,    // two or more functions admit the flow and no `recv` is given
  UnknownFunction,
  UnknownEntity,
};

struct ReceiverResolution
{
  ReceiverStatus status = ReceiverStatus::NoFunctions;
  const FunctionSpec * function = nullptr;
};

/// Resolves the receiving function f_y of an interaction: the `recv` name
/// when given, else the unique function whose domain contains the flow.
[[nodiscard]] ReceiverResolution resolve_receiver(const Interaction & ir, const WorldModel & model);

/// o(x,y) in Dom(f_y), or trivially true when y declares no function.
/// Depends only on the destination entity, never on the boundary.
[[nodiscard]] bool admissible(const Interaction & ir, const WorldModel & model);

}  // namespace psworld
