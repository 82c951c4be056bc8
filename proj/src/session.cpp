#include "psworld/session.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "psworld/activation.hpp"
#include "psworld/boundary.hpp"
#include "psworld/dsl.hpp"
#include "psworld/outcome.hpp"
#include "psworld/report.hpp"
#include "psworld/sufficiency.hpp"
#include "psworld/validate.hpp"

namespace psworld
{

namespace
{

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string & s)
{
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

IdSet idset_arg(const std::string & s)
{
  IdSet out;
  std::string cur;
  for (const char c : s) {
    if (c == '{' || c == '}' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.insert(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.insert(cur);
  return out;
}

const std::set<std::string> block_keywords = {"entity", "interaction", "context", "outcome",
                                              "stakeholder", "requirement", "option"};

std::string render(const std::vector<Diagnostic> & ds)
{
  std::string out;
  for (const auto & d : ds) out += format_diagnostic(d) + "\n";
  return out;
}

}  // namespace

Session::Session(WorldModel initial) : initial_(initial), model_(std::move(initial)) {}

std::string Session::usage()
{
  return "commands:\n"
         "  entity|interaction|context|outcome|stakeholder|requirement|option <block>\n"
         "  interact <id>: <src> -> <dst> flow <flow> [via <if>] [recv <fn>]\n"
         "  boundary <idset>            rescope <idset>\n"
         "  activate <ctx>              eval <outcome> <ctx> [--explain]\n"
         "  why <interaction> [<ctx>]   minimal <outcome> [<ctx-set>]\n"
         "  audit                       outcomes\n"
         "  classify  check  show  history  undo  save <path>  help\n";
}

std::string Session::feed(const std::string & line)
{
  for (const char c : line) {
    if (c == '{') ++depth_;
    if (c == '}') --depth_;
  }
  buffer_ += buffer_.empty() ? line : "\n" + line;
  if (depth_ > 0) return {};
  std::string command = std::move(buffer_);
  buffer_.clear();
  depth_ = 0;
  return execute(command);
}

std::string Session::mutate(const std::string & command, const std::string & block_text, const std::string & inverse)
{
  WorldModel next = model_;
  auto diags = parse_block_into(next, block_text);
  if (has_errors(diags)) return "rejected:\n" + render(diags);
  const auto before = validate_model(model_);
  std::set<std::string> seen;
  for (const auto & d : before) seen.insert(format_diagnostic(d));
  history_.push_back({command, inverse, model_});
  model_ = std::move(next);
  std::string out = "ok\n";
  for (const auto & d : validate_model(model_)) {
    if (!seen.count(format_diagnostic(d))) out += "  " + format_diagnostic(d) + "\n";
  }
  return out;
}

std::string Session::execute(const std::string & raw)
{
  const std::string command = trim(raw);
  if (command.empty() || command[0] == '#') return {};
  const auto argv = words(command);
  const std::string & verb = argv[0];
  const std::string rest = trim(command.substr(verb.size()));

  try {
    if (block_keywords.count(verb)) {
      return mutate(command, command, "remove the " + verb + " declared by this command");
    }
    if (verb == "interact") {
      return mutate(command, "interaction " + rest, "remove interaction " + (argv.size() > 1 ? argv[1] : ""));
    }
    if (verb == "boundary") {
      const IdSet ids = idset_arg(rest);
      if (ids.empty()) return "usage: boundary <idset>\n";
      WorldModel saved = model_;
      model_.boundary.reset();
      std::string out = mutate(command, "boundary internal " + report::braces(ids), "restore the previous boundary");
      if (out.starts_with("rejected")) {
        model_ = std::move(saved);
      } else {
        history_.back().before = std::move(saved);
      }
      return out;
    }
    if (verb == "rescope") {
      auto [next, plan] = rescope(model_, idset_arg(rest));
      history_.push_back({command, "restore the previous boundary", model_});
      model_ = std::move(next);
      return report::text(plan);
    }
    if (verb == "undo") {
      if (history_.empty()) return "nothing to undo\n";
      model_ = history_.back().before;
      const std::string undone = history_.back().command;
      history_.pop_back();
      return "undid: " + undone + "\n";
    }
    if (verb == "activate" && argv.size() == 2) {
      const auto active = compute_active_set(model_, argv[1]);
      last_context_ = argv[1];
      return report::text(active) + render(active.diagnostics);
    }
    if (verb == "eval" && (argv.size() == 3 || (argv.size() == 4 && argv[3] == "--explain"))) {
      const auto v = evaluate_outcome(model_, argv[1], argv[2]);
      std::string out = report::text(v);
      if (argv.size() == 4 && v.witness) {
        const auto active = compute_active_set(model_, argv[2]);
        for (const auto & id : *v.witness) out += render_derivation(explain_activation(active, id));
      }
      return out;
    }
    if (verb == "why" && (argv.size() == 2 || argv.size() == 3)) {
      const ContextId ctx = argv.size() == 3 ? argv[2] : last_context_.value_or("");
      if (ctx.empty()) return "why: no context; run `activate <ctx>` first or name one\n";
      return render_derivation(explain_activation(compute_active_set(model_, ctx), argv[1]));
    }
    if (verb == "minimal" && argv.size() >= 2) {
      const std::string tail = trim(rest.substr(argv[1].size()));
      const IdSet contexts = tail.empty() ? model_.context_ids() : idset_arg(tail);
      return report::text(find_minimal_sets(model_, argv[1], contexts, minimal_set_options_from_env()));
    }
    if (verb == "audit" && argv.size() == 1) {
      return report::text(audit_sufficiency(model_, model_.desired_outcome_ids(), model_.context_ids()));
    }
    if (verb == "outcomes" && argv.size() == 1) {
      return report::text(outcome_matrix(model_, model_.context_ids()));
    }
    if (verb == "classify" && argv.size() == 1) return report::text(classify_all(model_));
    if (verb == "check" && argv.size() == 1) {
      const auto diags = validate_model(model_);
      return diags.empty() ? "no diagnostics\n" : render(diags);
    }
    if (verb == "show" && argv.size() == 1) return serialize_model(model_);
    if (verb == "history" && argv.size() == 1) {
      std::string out;
      for (std::size_t i = 0; i < history_.size(); ++i) {
        out += std::to_string(i + 1) + ". " + history_[i].command + "   (undo: " + history_[i].inverse + ")\n";
      }
      return out;
    }
    if (verb == "save" && argv.size() == 2) {
      std::ofstream file(argv[1]);
      if (!file) return "error[io] cannot write '" + argv[1] + "'\n";
      file << serialize_model(model_);
      return "saved " + argv[1] + "\n";
    }
    if (verb == "help") return usage();
  } catch (const Error & e) {
    return "error[" + e.code() + "] " + e.what() + "\n";
  }
  return "malformed command: " + command + "\n" + usage();
}

WorldModel Session::replay(const WorldModel & initial, const std::vector<HistoryEntry> & history)
{
  Session s(initial);
  for (const auto & h : history) (void)s.execute(h.command);
  return s.model();
}

}  // namespace psworld
