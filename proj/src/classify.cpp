#include "psworld/classify.hpp"

namespace psworld
{

std::string to_string(InteractionClass c)
{
  switch (c) {
    case InteractionClass::Internal: return "internal";
    case InteractionClass::Inbound: return "inbound";
    case InteractionClass::Outbound: return "outbound";
    case InteractionClass::External: return "external";
  }
  return "?";
}

InteractionClass classify_interaction(
  const Interaction & ir, const Boundary & boundary, const WorldModel & universe)
{
  for (const auto * endpoint : {&ir.source, &ir.dest}) {
    if (universe.find_entity(*endpoint) == nullptr) {
      throw Error("unresolved-endpoint",
                  "interaction '" + ir.id + "' references undeclared entity '" + *endpoint + "'");
    }
  }
  const bool src_in = boundary.internal.count(ir.source) > 0;
  const bool dst_in = boundary.internal.count(ir.dest) > 0;
  if (src_in && dst_in) return InteractionClass::Internal;
  if (!src_in && dst_in) return InteractionClass::Inbound;
  if (src_in && !dst_in) return InteractionClass::Outbound;
  return InteractionClass::External;
}

Classification classify_all(const WorldModel & model)
{
  if (!model.boundary) throw Error("missing-boundary", "model declares no boundary");
  return classify_all(model, *model.boundary);
}

Classification classify_all(const WorldModel & model, const Boundary & boundary)
{
  Classification out;
  for (const auto & ir : model.interactions) {
    out.emplace(ir.id, classify_interaction(ir, boundary, model));
  }
  return out;
}

std::array<std::size_t, 4> partition_sizes(const Classification & c)
{
  std::array<std::size_t, 4> sizes{};
  for (const auto & [id, cls] : c) ++sizes[static_cast<std::size_t>(cls)];
  return sizes;
}

ReceiverResolution resolve_receiver(const Interaction & ir, const WorldModel & model)
{
  const auto * dest = model.find_entity(ir.dest);
  if (dest == nullptr) return {ReceiverStatus::UnknownEntity, nullptr};
  if (!ir.dest_function.empty()) {
    const auto * f = dest->function(ir.dest_function);
    if (f == nullptr) return {ReceiverStatus::UnknownFunction, nullptr};
    if (!f->domain.count(ir.flow)) return {ReceiverStatus::Inadmissible, f};
    return {ReceiverStatus::Resolved, f};
  }
  if (dest->functions.empty()) return {ReceiverStatus::NoFunctions, nullptr};
  const FunctionSpec * found = nullptr;
  for (const auto & f : dest->functions) {
    if (!f.domain.count(ir.flow)) continue;
    if (found != nullptr) return {ReceiverStatus::Ambiguous, found};
    found = &f;
  }
  if (found == nullptr) return {ReceiverStatus::Inadmissible, nullptr};
  return {ReceiverStatus::Resolved, found};
}

bool admissible(const Interaction & ir, const WorldModel & model)
{
  const auto r = resolve_receiver(ir, model);
  return r.status == ReceiverStatus::NoFunctions || r.status == ReceiverStatus::Resolved;
}

}  // namespace psworld
