#include "psworld/activation.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "psworld/classify.hpp"

namespace psworld
{

std::string to_string(Rule r)
{
  switch (r) {
    case Rule::Seed: return "seed";
    case Rule::Fire: return "fire";
    case Rule::Relay: return "relay";
  }
  return "?";
}

namespace
{

using FunctionKey = std::pair<EntityId, std::string>;

class Closure
{
public:
  Closure(const WorldModel & model, ActiveSet & out) : model_(model), out_(out) {}

  void seed(const ContextDecl & context)
  {
    const std::set<Emission> emissions(context.emissions.begin(), context.emissions.end());
    for (const auto & em : emissions) {
      const auto * src = model_.find_entity(em.source);
      const auto * ir = model_.find_interaction(em.via);
      if (src == nullptr || ir == nullptr || src->kind != EntityKind::Environment ||
          ir->source != em.source || ir->flow != em.flow || !model_.structurally_available(*ir)) {
        throw Error("emission-not-inbound", "context '" + context.id + "' emits '" + em.flow + "' on '" +
                                              em.via + "', which is not an inbound interaction from '" +
                                              em.source + "'");
      }
      if (!admissible(*ir, model_)) {
        out_.diagnostics.push_back({Severity::Warn, "inadmissible-emission",
                                    "emission on '" + ir->id + "' is not admissible at '" + ir->dest +
                                      "' and activates nothing",
                                    em.span, "context-activation"});
        continue;
      }
      activate(*ir, Activation{Rule::Seed, em.source, {}, {}, 0});
    }
  }

  void run()
  {
    while (!queue_.empty()) {
      const Interaction & ir = *queue_.front();
      queue_.pop_front();
      deliver(ir);
    }
  }

private:
  void activate(const Interaction & ir, Activation step)
  {
    if (out_.active.count(ir.id) || !model_.structurally_available(ir) || !admissible(ir, model_)) {
      return;
    }
    out_.active.insert(ir.id);
    out_.delivery.emplace(ir.id, ir.flow);
    out_.derivation.emplace(ir.id, std::move(step));
    queue_.push_back(&ir);
  }

  int layer_of(const InteractionId & id) const { return out_.derivation.at(id).layer; }

  void deliver(const Interaction & ir)
  {
    const auto * dest = model_.find_entity(ir.dest);
    const auto receiver = resolve_receiver(ir, model_);
    const std::string fn = receiver.function != nullptr ? receiver.function->name : std::string();
    auto & inbox = delivered_[{ir.dest, fn}];
    const bool fresh = inbox.emplace(ir.flow, ir.id).second;

    if (dest->kind == EntityKind::InternalFunction && receiver.function != nullptr && fresh) {
      fire(*dest, *receiver.function, ir);
    }
    if (dest->kind == EntityKind::ExternalSystem) {
      for (const auto & rule : dest->relay) {
        if (rule.input != ir.flow) continue;
        for (const auto & target : rule.interactions) {
          const auto * next = model_.find_interaction(target);
          if (next == nullptr || next->source != dest->id) continue;
          activate(*next, Activation{Rule::Relay, dest->id, {}, {ir.id}, layer_of(ir.id) + 1});
        }
      }
    }
  }

  void fire(const Entity & entity, const FunctionSpec & f, const Interaction & trigger)
  {
    const auto & inbox = delivered_[{entity.id, f.name}];
    IdSet inputs;
    std::vector<InteractionId> premises;
    if (f.firing == Firing::Any) {
      inputs.insert(trigger.flow);
      premises.push_back(trigger.id);
    } else {
      for (const auto & flow : f.domain) {
        auto it = inbox.find(flow);
        if (it == inbox.end()) return;
        premises.push_back(it->second);
      }
      inputs = f.domain;
    }
    out_.fired.emplace(entity.id, f.name);

    IdSet produced;
    for (const auto & in : inputs) {
      auto it = f.output_map.find(in);
      if (it != f.output_map.end()) produced.insert(it->second.begin(), it->second.end());
    }
    int layer = 0;
    for (const auto & p : premises) layer = std::max(layer, layer_of(p));
    for (const auto & next : model_.interactions) {
      if (next.source != entity.id || !produced.count(next.flow)) continue;
      activate(next, Activation{Rule::Fire, entity.id, f.name, premises, layer + 1});
    }
  }

  const WorldModel & model_;
  ActiveSet & out_;
  std::deque<const Interaction *> queue_;
  std::map<FunctionKey, std::map<FlowTypeId, InteractionId>> delivered_;
};

}  // namespace

ActiveSet compute_active_set(const WorldModel & model, const ContextDecl & context)
{
  ActiveSet out;
  out.context = context.id;
  Closure closure(model, out);
  closure.seed(context);
  closure.run();
  return out;
}

ActiveSet compute_active_set(const WorldModel & model, const ContextId & context)
{
  const auto * ctx = model.find_context(context);
  if (ctx == nullptr) throw Error("unknown-context", "context '" + context + "' is not declared");
  return compute_active_set(model, *ctx);
}

DerivationNode explain_activation(const ActiveSet & active, const InteractionId & interaction)
{
  auto it = active.derivation.find(interaction);
  if (it == active.derivation.end()) {
    throw Error("not-active", "interaction '" + interaction + "' is not active in context '" +
                                active.context + "'");
  }
  DerivationNode node{interaction, active.delivery.at(interaction), it->second, {}};
  for (const auto & p : it->second.premises) node.children.push_back(explain_activation(active, p));
  return node;
}

namespace
{

void render(const DerivationNode & n, int depth, std::ostringstream & out)
{
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << n.interaction << " [" << n.flow << "] <= "
      << to_string(n.step.rule) << ' ' << n.step.entity;
  if (!n.step.function.empty()) out << '.' << n.step.function;
  out << '\n';
  for (const auto & c : n.children) render(c, depth + 1, out);
}

}  // namespace

std::string render_derivation(const DerivationNode & node)
{
  std::ostringstream out;
  render(node, 0, out);
  return out.str();
}

SimulationTrace simulate(const WorldModel & model, const std::vector<ContextId> & schedule)
{
  SimulationTrace trace;
  for (const auto & e : model.entities) {
    for (const auto & f : e.functions) {
      if (f.states) trace.final_states[{e.id, f.name}] = f.states->initial;
    }
  }

  for (const auto & ctx_id : schedule) {
    const ActiveSet active = compute_active_set(model, ctx_id);

    struct Delivery
    {
      int layer;
      const Interaction * ir;
      const Entity * dest;
      const FunctionSpec * fn;
    };
    std::vector<Delivery> deliveries;
    for (const auto & id : active.active) {
      const auto * ir = model.find_interaction(id);
      const auto r = resolve_receiver(*ir, model);
      if (r.status != ReceiverStatus::Resolved || !r.function->states) continue;
      deliveries.push_back({active.derivation.at(id).layer, ir, model.find_entity(ir->dest), r.function});
    }
    std::sort(deliveries.begin(), deliveries.end(), [](const Delivery & a, const Delivery & b) {
      return std::tie(a.layer, a.ir->id) < std::tie(b.layer, b.ir->id);
    });

    for (const auto & d : deliveries) {
      auto & state = trace.final_states[{d.dest->id, d.fn->name}];
      const auto * next = d.fn->states->next(state, d.ir->flow);
      if (next == nullptr) {
        trace.diagnostics.push_back({Severity::Warn, "no-transition",
                                     d.dest->id + "." + d.fn->name + " has no transition from '" + state +
                                       "' on '" + d.ir->flow + "'; state unchanged",
                                     d.ir->span, "state-evolution"});
        continue;
      }
      trace.steps.push_back({ctx_id, d.dest->id, d.fn->name, state, d.ir->flow, *next, d.ir->id});
      state = *next;
    }
  }
  return trace;
}

}  // namespace psworld
