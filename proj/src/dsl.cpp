#include "psworld/dsl.hpp"

#include <cctype>
#include <sstream>

#include "psworld/validate.hpp"

namespace psworld
{

namespace
{

constexpr const char * provenance_prefix = "# provenance: ";

enum class Tok { Ident, String, LBrace, RBrace, Comma, Colon, Arrow, End, Bad };

struct Token
{
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
  bool line_start = false;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool ident_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

class Lexer
{
public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run(std::vector<std::string> & provenance)
  {
    std::vector<Token> out;
    bool line_start = true;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        advance();
        line_start = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '#') {
        const auto end = text_.find('\n', pos_);
        const auto comment = text_.substr(pos_, end == std::string_view::npos ? text_.npos : end - pos_);
        if (comment.starts_with(provenance_prefix)) {
          provenance.emplace_back(comment.substr(std::string_view(provenance_prefix).size()));
        }
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      Token t;
      t.span = {file_, line_, col_, 1};
      t.line_start = line_start;
      line_start = false;
      const std::size_t begin = pos_;
      if (ident_start(c)) {
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
          if (text_[pos_] == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
          advance();
        }
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(begin, pos_ - begin));
      } else if (c == '"') {
        lex_string(t);
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance();
        advance();
        t.kind = Tok::Arrow;
        t.text = "->";
      } else {
        advance();
        t.text = std::string(1, c);
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case ',': t.kind = Tok::Comma; break;
          case ':': t.kind = Tok::Colon; break;
          default: t.kind = Tok::Bad; break;
        }
      }
      t.span.length = std::max(1, static_cast<int>(pos_ - begin));
      out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.span = {file_, line_, col_, 1};
    end.line_start = true;
    out.push_back(end);
    return out;
  }

private:
  void advance()
  {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void lex_string(Token & t)
  {
    advance();
    t.kind = Tok::Bad;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') return;
      advance();
      if (c == '"') {
        t.kind = Tok::String;
        return;
      }
      if (c == '\\' && pos_ < text_.size()) {
        const char e = text_[pos_];
        advance();
        if (e == 'n') t.text += '\n';
        else if (e == '"' || e == '\\') t.text += e;
        else return;
        continue;
      }
      t.text += c;
    }
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError
{
  Diagnostic diag;
};

const IdSet top_level = {"option", "entity", "interaction", "boundary", "context", "outcome", "stakeholder",
                         "requirement"};

std::string describe(const Token & t)
{
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string";
    default: return "'" + t.text + "'";
  }
}

class Parser
{
public:
  Parser(std::vector<Token> tokens, WorldModel & model) : toks_(std::move(tokens)), m_(model) {}

  std::vector<Diagnostic> run()
  {
    while (peek().kind != Tok::End) {
      const std::size_t start = i_;
      try {
        block();
      } catch (const SyntaxError & e) {
        diags_.push_back(e.diag);
        if (i_ == start) take();
        recover();
      }
    }
    return std::move(diags_);
  }

private:
  const Token & peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }

  const Token & take()
  {
    const Token & t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }

  [[noreturn]] void fail(const Token & at, const std::string & rule, const std::string & message) const
  {
    throw SyntaxError{{Severity::Error, rule, message, at.span, ""}};
  }

  [[noreturn]] void unexpected(const Token & at, const std::string & wanted) const
  {
    fail(at, "syntax", "expected " + wanted + ", found " + describe(at));
  }

  void recover()
  {
    while (peek().kind != Tok::End) {
      const auto & t = peek();
      if (t.line_start && t.kind == Tok::Ident && top_level.count(t.text)) return;
      take();
    }
  }

  bool at_word(const char * w) const { return peek().kind == Tok::Ident && peek().text == w; }

  void word(const char * w)
  {
    if (!at_word(w)) unexpected(peek(), std::string("'") + w + "'");
    take();
  }

  const Token & ident(const char * what)
  {
    if (peek().kind != Tok::Ident) unexpected(peek(), what);
    return take();
  }

  void expect(Tok k, const char * what)
  {
    if (peek().kind != k) unexpected(peek(), what);
    take();
  }

  template <class Sink>
  void idlist(Sink && sink)
  {
    expect(Tok::LBrace, "'{'");
    if (peek().kind == Tok::RBrace) {
      take();
      return;
    }
    for (;;) {
      sink(ident("identifier").text);
      if (peek().kind == Tok::Comma) {
        take();
        continue;
      }
      expect(Tok::RBrace, "',' or '}'");
      return;
    }
  }

  IdSet idset()
  {
    IdSet s;
    idlist([&](const std::string & id) { s.insert(id); });
    return s;
  }

  std::vector<std::string> idvec()
  {
    std::vector<std::string> v;
    idlist([&](const std::string & id) { v.push_back(id); });
    return v;
  }

  void block()
  {
    const Token & kw = peek();
    if (kw.kind != Tok::Ident) unexpected(kw, "a block keyword");
    if (kw.text == "option") return option();
    if (kw.text == "entity") return entity();
    if (kw.text == "interaction") return interaction();
    if (kw.text == "boundary") return boundary();
    if (kw.text == "context") return context();
    if (kw.text == "outcome") return outcome();
    if (kw.text == "stakeholder") return stakeholder();
    if (kw.text == "requirement") return requirement();
    fail(kw, "unknown-keyword", "unknown keyword '" + kw.text + "'");
  }

  void option()
  {
    take();
    const Token & name = ident("option name");
    if (name.text != "allow-self-loops") fail(name, "unknown-option", "unknown option '" + name.text + "'");
    m_.allow_self_loops = true;
  }

  void entity()
  {
    take();
    Entity e;
    const Token & id = ident("entity id");
    e.id = id.text;
    e.span = id.span;
    word("kind");
    const Token & kind = ident("entity kind");
    if (kind.text == "internal") e.kind = EntityKind::InternalFunction;
    else if (kind.text == "external") e.kind = EntityKind::ExternalSystem;
    else if (kind.text == "environment") e.kind = EntityKind::Environment;
    else unexpected(kind, "'internal', 'external' or 'environment'");

    if (peek().kind == Tok::LBrace) {
      take();
      while (peek().kind != Tok::RBrace) {
        if (at_word("function")) e.functions.push_back(function());
        else if (at_word("relay")) e.relay.push_back(relay());
        else if (at_word("emits")) e.emits.push_back(emits());
        else unexpected(peek(), "'function', 'relay', 'emits' or '}'");
      }
      take();
    }
    m_.entities.push_back(std::move(e));
  }

  FunctionSpec function()
  {
    take();
    FunctionSpec f;
    const Token & name = ident("function name");
    f.name = name.text;
    f.span = name.span;
    word("domain");
    f.domain = idset();
    word("codomain");
    f.codomain = idset();
    while (at_word("map")) {
      take();
      const Token & in = ident("input flow");
      expect(Tok::Arrow, "'->'");
      auto outs = idset();
      f.output_map[in.text].insert(outs.begin(), outs.end());
    }
    if (at_word("firing")) {
      take();
      const Token & rule = ident("'all' or 'any'");
      if (rule.text == "all") f.firing = Firing::All;
      else if (rule.text == "any") f.firing = Firing::Any;
      else unexpected(rule, "'all' or 'any'");
    }
    if (at_word("states")) {
      StateMachine sm;
      sm.span = take().span;
      sm.states = idvec();
      word("initial");
      sm.initial = ident("initial state").text;
      while (at_word("on")) {
        take();
        Transition t;
        const Token & from = ident("state");
        t.from = from.text;
        t.span = from.span;
        expect(Tok::Comma, "','");
        t.input = ident("input flow").text;
        expect(Tok::Arrow, "'->'");
        t.to = ident("state").text;
        sm.transitions.push_back(std::move(t));
      }
      f.states = std::move(sm);
    }
    return f;
  }

  RelayRule relay()
  {
    RelayRule r;
    r.span = take().span;
    r.input = ident("received flow").text;
    expect(Tok::Arrow, "'->'");
    r.interactions = idset();
    return r;
  }

  EmitDecl emits()
  {
    EmitDecl d;
    d.span = take().span;
    d.flow = ident("flow").text;
    word("via");
    d.via = ident("interaction id").text;
    return d;
  }

  void interaction()
  {
    take();
    Interaction ir;
    const Token & id = ident("interaction id");
    ir.id = id.text;
    ir.span = id.span;
    expect(Tok::Colon, "':'");
    ir.source = ident("source entity").text;
    expect(Tok::Arrow, "'->'");
    ir.dest = ident("destination entity").text;
    word("flow");
    ir.flow = ident("flow type").text;
    if (at_word("via")) {
      take();
      ir.interface = ident("interface").text;
    }
    if (at_word("recv")) {
      take();
      ir.dest_function = ident("receiving function").text;
    }
    m_.interactions.push_back(std::move(ir));
  }

  void boundary()
  {
    const Token & kw = take();
    if (m_.boundary) fail(kw, "duplicate-boundary", "a model declares exactly one boundary");
    Boundary b;
    b.span = kw.span;
    word("internal");
    b.internal = idset();
    if (at_word("external")) {
      take();
      b.external = idset();
    }
    m_.boundary = std::move(b);
  }

  void context()
  {
    take();
    ContextDecl c;
    const Token & id = ident("context id");
    c.id = id.text;
    c.span = id.span;
    expect(Tok::LBrace, "'{'");
    while (at_word("emit")) {
      Emission e;
      e.span = take().span;
      e.source = ident("environment entity").text;
      word("flow");
      e.flow = ident("flow type").text;
      word("on");
      e.via = ident("interaction id").text;
      c.emissions.push_back(std::move(e));
    }
    expect(Tok::RBrace, "'emit' or '}'");
    m_.contexts.push_back(std::move(c));
  }

  void outcome()
  {
    take();
    OutcomeDecl o;
    const Token & id = ident("outcome id");
    o.id = id.text;
    o.span = id.span;
    if (peek().kind == Tok::String) o.description = take().text;
    if (at_word("desired")) {
      take();
      word("for");
      o.supports = idvec();
    }
    while (at_word("grounding")) {
      take();
      o.groundings.push_back(idset());
    }
    m_.outcomes.push_back(std::move(o));
  }

  void stakeholder()
  {
    take();
    Stakeholder sh;
    const Token & id = ident("stakeholder id");
    sh.id = id.text;
    sh.span = id.span;
    while (at_word("goal")) {
      take();
      Goal g;
      const Token & gid = ident("goal id");
      g.id = gid.text;
      g.span = gid.span;
      if (peek().kind != Tok::String) unexpected(peek(), "goal description string");
      g.description = take().text;
      sh.goals.push_back(std::move(g));
    }
    m_.stakeholders.push_back(std::move(sh));
  }

  void requirement()
  {
    take();
    RequirementDecl r;
    const Token & id = ident("requirement id");
    r.id = id.text;
    r.span = id.span;
    word("subject");
    r.subject = ident("subject entity").text;
    word("in");
    r.input = ident("input flow").text;
    word("out");
    r.output = ident("output flow").text;
    if (at_word("when")) {
      take();
      r.condition = ident("context id").text;
    }
    m_.requirements.push_back(std::move(r));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  WorldModel & m_;
  std::vector<Diagnostic> diags_;
};

std::vector<Diagnostic> parse_into(WorldModel & m, std::string_view text, const std::string & file)
{
  Lexer lexer(text, file);
  auto tokens = lexer.run(m.provenance.lines);
  return Parser(std::move(tokens), m).run();
}

void append_all(auto & to, const auto & from) { to.insert(to.end(), from.begin(), from.end()); }

}  // namespace

ParseResult parse_model(std::string_view text, const std::string & file)
{
  ParseResult result;
  WorldModel m;
  result.diagnostics = parse_into(m, text, file);
  if (result.diagnostics.empty() && m.entities.empty()) {
    result.diagnostics.push_back(
      {Severity::Error, "no-entities", "the model declares no entities", {file, 1, 1, 1}, "closed-world"});
  }
  append_all(result.diagnostics, check_duplicate_ids(m));
  if (!has_errors(result.diagnostics)) result.model = std::move(m);
  return result;
}

std::vector<Diagnostic> parse_block_into(WorldModel & model, std::string_view text, const std::string & file)
{
  WorldModel block;
  auto diags = parse_into(block, text, file);
  if (has_errors(diags)) return diags;
  if (block.boundary && model.boundary) {
    diags.push_back({Severity::Error, "duplicate-boundary", "a model declares exactly one boundary",
                     block.boundary->span, "boundary-partition"});
    return diags;
  }

  WorldModel merged = model;
  merged.allow_self_loops = merged.allow_self_loops || block.allow_self_loops;
  append_all(merged.entities, block.entities);
  append_all(merged.interactions, block.interactions);
  if (block.boundary) merged.boundary = block.boundary;
  append_all(merged.contexts, block.contexts);
  append_all(merged.outcomes, block.outcomes);
  append_all(merged.stakeholders, block.stakeholders);
  append_all(merged.requirements, block.requirements);
  append_all(merged.provenance.lines, block.provenance.lines);

  append_all(diags, check_duplicate_ids(merged));
  if (!has_errors(diags)) model = std::move(merged);
  return diags;
}

namespace
{

std::string quote(const std::string & s)
{
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + '"';
}

template <class Range>
std::string braces(const Range & ids)
{
  std::string out = "{";
  bool first = true;
  for (const auto & id : ids) {
    out += first ? "" : ", ";
    out += id;
    first = false;
  }
  return out + "}";
}

std::string kind_word(EntityKind k)
{
  switch (k) {
    case EntityKind::InternalFunction: return "internal";
    case EntityKind::ExternalSystem: return "external";
    case EntityKind::Environment: return "environment";
  }
  return "?";
}

void write_function(std::ostringstream & out, const FunctionSpec & f)
{
  out << "  function " << f.name << " domain " << braces(f.domain) << " codomain " << braces(f.codomain) << '\n';
  for (const auto & [in, outs] : f.output_map) out << "    map " << in << " -> " << braces(outs) << '\n';
  out << "    firing " << (f.firing == Firing::All ? "all" : "any") << '\n';
  if (!f.states) return;
  out << "    states " << braces(f.states->states) << " initial " << f.states->initial << '\n';
  for (const auto & t : f.states->transitions) {
    out << "      on " << t.from << ", " << t.input << " -> " << t.to << '\n';
  }
}

}  // namespace

std::string serialize_model(const WorldModel & m)
{
  std::ostringstream out;
  for (const auto & line : m.provenance.lines) out << provenance_prefix << line << '\n';
  if (!m.provenance.lines.empty()) out << '\n';
  if (m.allow_self_loops) out << "option allow-self-loops\n\n";

  for (const auto & e : m.entities) {
    out << "entity " << e.id << " kind " << kind_word(e.kind);
    if (e.functions.empty() && e.relay.empty() && e.emits.empty()) {
      out << '\n';
      continue;
    }
    out << " {\n";
    for (const auto & f : e.functions) write_function(out, f);
    for (const auto & r : e.relay) out << "  relay " << r.input << " -> " << braces(r.interactions) << '\n';
    for (const auto & em : e.emits) out << "  emits " << em.flow << " via " << em.via << '\n';
    out << "}\n";
  }
  if (!m.entities.empty()) out << '\n';

  for (const auto & ir : m.interactions) {
    out << "interaction " << ir.id << ": " << ir.source << " -> " << ir.dest << " flow " << ir.flow;
    if (!ir.interface.empty()) out << " via " << ir.interface;
    if (!ir.dest_function.empty()) out << " recv " << ir.dest_function;
    out << '\n';
  }
  if (!m.interactions.empty()) out << '\n';

  if (m.boundary) {
    out << "boundary internal " << braces(m.boundary->internal);
    if (m.boundary->external) out << " external " << braces(*m.boundary->external);
    out << "\n\n";
  }

  for (const auto & c : m.contexts) {
    out << "context " << c.id << " {\n";
    for (const auto & e : c.emissions) {
      out << "  emit " << e.source << " flow " << e.flow << " on " << e.via << '\n';
    }
    out << "}\n\n";
  }

  for (const auto & sh : m.stakeholders) {
    out << "stakeholder " << sh.id << '\n';
    for (const auto & g : sh.goals) out << "  goal " << g.id << ' ' << quote(g.description) << '\n';
    out << '\n';
  }

  for (const auto & o : m.outcomes) {
    out << "outcome " << o.id;
    if (!o.description.empty()) out << ' ' << quote(o.description);
    if (!o.supports.empty()) out << " desired for " << braces(o.supports);
    out << '\n';
    for (const auto & g : o.groundings) out << "  grounding " << braces(g) << '\n';
  }
  if (!m.outcomes.empty()) out << '\n';

  for (const auto & r : m.requirements) {
    out << "requirement " << r.id << " subject " << r.subject << " in " << r.input << " out " << r.output;
    if (r.condition) out << " when " << *r.condition;
    out << '\n';
  }

  std::string text = out.str();
  while (text.size() >= 2 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n') text.pop_back();
  return text;
}

}  // namespace psworld
