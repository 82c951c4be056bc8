// psworld: command-line front end for problem-space world models.
//
// Exit codes: 0 success, 1 semantic findings, 2 usage or input errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "psworld/activation.hpp"
#include "psworld/boundary.hpp"
#include "psworld/dsl.hpp"
#include "psworld/outcome.hpp"
#include "psworld/report.hpp"
#include "psworld/session.hpp"
#include "psworld/sufficiency.hpp"
#include "psworld/validate.hpp"

namespace
{

using namespace psworld;

constexpr int exit_ok = 0;
constexpr int exit_findings = 1;
constexpr int exit_usage = 2;

struct Usage : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void print_diagnostics(const std::vector<Diagnostic> & ds)
{
  for (const auto & d : ds) std::cerr << format_diagnostic(d) << '\n';
}

WorldModel load(const std::string & path)
{
  auto parsed = parse_model(read_file(path), path);
  print_diagnostics(parsed.diagnostics);
  if (!parsed.ok()) throw Usage("'" + path + "' does not parse");
  return std::move(*parsed.model);
}

IdSet split_ids(const std::string & s)
{
  IdSet out;
  std::string cur;
  for (const char c : s) {
    if (c == ',' || c == '{' || c == '}' || c == ' ') {
      if (!cur.empty()) out.insert(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.insert(cur);
  return out;
}

struct Common
{
  std::string file;
  std::string format = "text";
  std::string contexts;
  std::string desired;

  [[nodiscard]] bool json() const { return format == "json"; }

  [[nodiscard]] IdSet context_set(const WorldModel & m) const { return contexts.empty() ? m.context_ids() : split_ids(contexts); }

  [[nodiscard]] IdSet desired_set(const WorldModel & m) const
  {
    return desired.empty() ? m.desired_outcome_ids() : split_ids(desired);
  }
};

template <class T>
void emit(const Common & opt, const T & value)
{
  if (opt.json()) std::cout << report::to_json(value).dump(2) << '\n';
  else std::cout << report::text(value);
}

void add_format(CLI::App * cmd, Common & opt)
{
  cmd->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
}

void add_contexts(CLI::App * cmd, Common & opt)
{
  cmd->add_option("--contexts", opt.contexts, "comma-separated context ids (default: all declared)");
}

void write_or_print(const std::string & path, const std::string & text)
{
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Usage("cannot write '" + path + "'");
  out << text;
}

bool is_input_error(const std::string & code)
{
  static const IdSet codes = {"unknown-outcome", "unknown-context", "unknown-interaction", "unknown-entity",
                              "missing-boundary", "empty-scope", "env-cannot-be-internal", "not-a-rescope",
                              "empty-context-family", "not-active", "duplicate-id"};
  return codes.count(code) > 0;
}

int run_repl(const std::string & file)
{
  Session session(file.empty() ? WorldModel{} : load(file));
  const bool interactive = isatty(STDIN_FILENO) != 0;
  if (interactive) std::cout << Session::usage();
  std::string line;
  for (;;) {
    if (interactive) std::cout << (session.pending() ? "...> " : "psw> ") << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (line == "quit" || line == "exit") break;
    std::cout << session.feed(line);
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"psworld: problem-space world models"};
  app.require_subcommand(1);
  Common opt;

  bool strict = false;
  auto * check = app.add_subcommand("check", "validate a model");
  check->add_option("file", opt.file)->required();
  check->add_flag("--strict", strict, "treat warnings as errors");
  add_format(check, opt);

  auto * fmt = app.add_subcommand("fmt", "print the canonical serialization");
  fmt->add_option("file", opt.file)->required();

  auto * classify = app.add_subcommand("classify", "classify every interaction against the boundary");
  classify->add_option("file", opt.file)->required();
  add_format(classify, opt);

  std::string ctx;
  auto * activate = app.add_subcommand("activate", "compute the active interaction set of a context");
  activate->add_option("file", opt.file)->required();
  activate->add_option("context", ctx)->required();
  add_format(activate, opt);

  std::string outcome;
  bool explain = false;
  auto * eval = app.add_subcommand("eval", "evaluate one outcome under one context");
  eval->add_option("file", opt.file)->required();
  eval->add_option("outcome", outcome)->required();
  eval->add_option("context", ctx)->required();
  eval->add_flag("--explain", explain, "print the activation derivation of the witness");
  add_format(eval, opt);

  std::string ctx2;
  auto * invariance = app.add_subcommand("invariance", "compare an outcome across two contexts");
  invariance->add_option("file", opt.file)->required();
  invariance->add_option("outcome", outcome)->required();
  invariance->add_option("context1", ctx)->required();
  invariance->add_option("context2", ctx2)->required();
  add_format(invariance, opt);

  std::string schedule;
  auto * simulate_cmd = app.add_subcommand("simulate", "run state machines over a context schedule");
  simulate_cmd->add_option("file", opt.file)->required();
  simulate_cmd->add_option("--schedule", schedule, "comma-separated contexts in order (default: declaration order)");
  add_format(simulate_cmd, opt);

  auto * outcomes = app.add_subcommand("outcomes", "outcome x context truth matrix");
  outcomes->add_option("file", opt.file)->required();
  add_contexts(outcomes, opt);
  add_format(outcomes, opt);

  bool heuristic = false;
  auto * minimal = app.add_subcommand("minimal-sets", "minimal interaction sets determining an outcome");
  minimal->add_option("file", opt.file)->required();
  minimal->add_option("outcome", outcome)->required();
  minimal->add_flag("--heuristic", heuristic, "greedy search above the subset cap (not certified)");
  add_contexts(minimal, opt);
  add_format(minimal, opt);

  auto * nonessential = app.add_subcommand("nonessential", "interactions removable without changing verdicts");
  nonessential->add_option("file", opt.file)->required();
  nonessential->add_option("--desired", opt.desired, "comma-separated outcomes (default: desired outcomes)");
  nonessential->add_flag("--heuristic", heuristic);
  add_contexts(nonessential, opt);
  add_format(nonessential, opt);

  std::string remove;
  std::string output;
  auto * reduce = app.add_subcommand("reduce", "remove certified non-essential interactions");
  reduce->add_option("file", opt.file)->required();
  reduce->add_option("--remove", remove, "comma-separated interactions")->required();
  reduce->add_option("--desired", opt.desired);
  reduce->add_option("-o,--output", output, "write the reduced model here");
  add_contexts(reduce, opt);

  std::string internal;
  auto * rescope_cmd = app.add_subcommand("rescope", "re-designate the system of interest");
  rescope_cmd->add_option("file", opt.file)->required();
  rescope_cmd->add_option("--internal", internal, "comma-separated entities inside the new boundary")->required();
  rescope_cmd->add_option("-o,--output", output, "write the rescoped model here");
  add_format(rescope_cmd, opt);

  std::string after_file;
  auto * verify = app.add_subcommand("verify-rescope", "check truth is unchanged between two boundaries");
  verify->add_option("before", opt.file)->required();
  verify->add_option("after", after_file)->required();
  add_contexts(verify, opt);
  add_format(verify, opt);

  auto * audit = app.add_subcommand("audit", "sufficiency checklist for desired outcomes");
  audit->add_option("file", opt.file)->required();
  audit->add_option("--desired", opt.desired, "comma-separated outcomes (default: desired outcomes)");
  add_contexts(audit, opt);
  add_format(audit, opt);

  auto * goals = app.add_subcommand("goals", "goal satisfaction (conjunction rule)");
  goals->add_option("file", opt.file)->required();
  add_contexts(goals, opt);
  add_format(goals, opt);

  auto * repl = app.add_subcommand("repl", "interactive session; reads commands from stdin");
  repl->add_option("file", opt.file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*check) {
      auto parsed = parse_model(read_file(opt.file), opt.file);
      auto diags = parsed.diagnostics;
      if (parsed.ok()) {
        const auto more = validate_model(*parsed.model);
        diags.insert(diags.end(), more.begin(), more.end());
      }
      if (opt.json()) std::cout << report::to_json(diags).dump(2) << '\n';
      else print_diagnostics(diags);
      const bool failed = has_errors(diags) || (strict && !diags.empty());
      return failed ? exit_findings : exit_ok;
    }
    if (*repl) return run_repl(opt.file);

    const WorldModel model = load(opt.file);
    if (*fmt) {
      std::cout << serialize_model(model);
      return exit_ok;
    }
    if (*classify) {
      emit(opt, classify_all(model));
      return exit_ok;
    }
    if (*activate) {
      const auto active = compute_active_set(model, ctx);
      print_diagnostics(active.diagnostics);
      emit(opt, active);
      return exit_ok;
    }
    if (*eval) {
      const auto v = evaluate_outcome(model, outcome, ctx);
      if (opt.json()) {
        auto j = report::to_json(v);
        if (explain && v.witness) {
          const auto active = compute_active_set(model, ctx);
          std::vector<std::string> trees;
          for (const auto & id : *v.witness) trees.push_back(render_derivation(explain_activation(active, id)));
          j["derivation"] = trees;
        }
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << report::text(v);
        if (explain && v.witness) {
          const auto active = compute_active_set(model, ctx);
          for (const auto & id : *v.witness) std::cout << render_derivation(explain_activation(active, id));
        }
      }
      return exit_ok;
    }
    if (*invariance) {
      emit(opt, check_invariance(model, outcome, ctx, ctx2));
      return exit_ok;
    }
    if (*simulate_cmd) {
      std::vector<ContextId> order;
      if (schedule.empty()) {
        for (const auto & c : model.contexts) order.push_back(c.id);
      } else {
        std::stringstream s(schedule);
        for (std::string id; std::getline(s, id, ',');) order.push_back(id);
      }
      const auto trace = simulate(model, order);
      print_diagnostics(trace.diagnostics);
      emit(opt, trace);
      return exit_ok;
    }
    if (*outcomes) {
      emit(opt, outcome_matrix(model, opt.context_set(model)));
      return exit_ok;
    }
    auto options = minimal_set_options_from_env();
    options.heuristic = heuristic;
    if (*minimal) {
      emit(opt, find_minimal_sets(model, outcome, opt.context_set(model), options));
      return exit_ok;
    }
    if (*nonessential) {
      emit(opt, find_nonessential(model, opt.desired_set(model), opt.context_set(model), options));
      return exit_ok;
    }
    if (*reduce) {
      const auto reduced = reduce_model(model, split_ids(remove), opt.desired_set(model), opt.context_set(model), options);
      write_or_print(output, serialize_model(reduced));
      return exit_ok;
    }
    if (*rescope_cmd) {
      const auto [next, plan] = rescope(model, split_ids(internal));
      emit(opt, plan);
      if (!output.empty()) write_or_print(output, serialize_model(next));
      return exit_ok;
    }
    if (*verify) {
      const WorldModel after = load(after_file);
      IdSet all;
      for (const auto & o : model.outcomes) all.insert(o.id);
      const auto r = verify_boundary_independence(model, after, all, opt.context_set(model));
      emit(opt, r);
      return r.defects == 0 ? exit_ok : exit_findings;
    }
    if (*audit) {
      const auto r = audit_sufficiency(model, opt.desired_set(model), opt.context_set(model));
      emit(opt, r);
      return r.sufficient ? exit_ok : exit_findings;
    }
    if (*goals) {
      const auto r = check_goal_satisfaction(model, opt.context_set(model));
      emit(opt, r);
      for (const auto & [g, s] : r) {
        if (!s.satisfied) return exit_findings;
      }
      return exit_ok;
    }
  } catch (const Usage & e) {
    std::cerr << "psworld: " << e.what() << '\n';
    return exit_usage;
  } catch (const Error & e) {
    std::cerr << "psworld: error[" << e.code() << "] " << e.what() << '\n';
    return is_input_error(e.code()) ? exit_usage : exit_findings;
  }
  return exit_usage;
}
