#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "dsl_internal.hpp"
#include "ocsis/error.hpp"

namespace ocsis {

namespace {

enum class Tok { Ident, Number, String, Symbol };

struct Token {
  Tok kind;
  std::string text;  // strings are unescaped
  int col;
  int len;
};

struct Line {
  const std::string* file;
  int number;
  std::vector<Token> tokens;
};

// Aborts the current line after its diagnostic has been recorded.
struct LineFailed {};

bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::span<const Source> sources) : sources_(sources) {}

  ParseResult run() {
    std::vector<Line> lines;
    for (const auto& src : sources_) lex(src, lines);
    for (const auto& line : lines) {
      if (keyword(line) == "param") guarded(line, [&] { parse_param(line); });
    }
    for (const auto& line : lines) {
      auto kw = keyword(line);
      if (kw.empty() || kw == "param") continue;
      guarded(line, [&] { parse_statement(line, kw); });
    }
    ParseResult result;
    if (!diags_.empty()) {
      result.diagnostics = std::move(diags_);
      return result;
    }
    auto problems = validate(set_);
    if (has_errors(problems)) {
      result.diagnostics = std::move(problems);
      return result;
    }
    result.set = std::move(set_);
    return result;
  }

 private:
  // ---------------------------------------------------------------- lexing

  void lex(const Source& src, std::vector<Line>& out) {
    std::istringstream in(src.text);
    std::string text;
    int number = 0;
    while (std::getline(in, text)) {
      ++number;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      Line line{&src.name, number, {}};
      if (lex_line(text, line)) out.push_back(std::move(line));
    }
  }

  bool lex_line(const std::string& text, Line& line) {
    std::size_t i = 0;
    auto span_at = [&](std::size_t col, std::size_t len) {
      return SourceSpan{*line.file, line.number, static_cast<int>(col) + 1, static_cast<int>(len)};
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ' || c == '\t') {
        ++i;
      } else if (c == '#') {
        break;
      } else if (c == '"') {
        std::size_t start = i++;
        std::string value;
        bool closed = false;
        while (i < text.size()) {
          if (text[i] == '\\' && i + 1 < text.size()) {
            value.push_back(text[i + 1]);
            i += 2;
          } else if (text[i] == '"') {
            closed = true;
            ++i;
            break;
          } else {
            value.push_back(text[i++]);
          }
        }
        if (!closed) {
          diags_.push_back(detail::make_error(diag::kSyntax, "unterminated string",
                                              span_at(start, text.size() - start)));
          return false;
        }
        line.tokens.push_back({Tok::String, value, int(start) + 1, int(i - start)});
      } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
        line.tokens.push_back({Tok::Symbol, "->", int(i) + 1, 2});
        i += 2;
      } else if (is_digit(c) || (c == '-' && i + 1 < text.size() && is_digit(text[i + 1]))) {
        std::size_t start = i++;
        while (i < text.size() && is_digit(text[i])) ++i;
        if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
          ++i;
          while (i < text.size() && is_digit(text[i])) ++i;
        }
        line.tokens.push_back({Tok::Number, text.substr(start, i - start), int(start) + 1,
                               int(i - start)});
      } else if (is_ident_start(c)) {
        std::size_t start = i;
        while (i < text.size() && is_ident_char(text[i])) ++i;
        line.tokens.push_back({Tok::Ident, text.substr(start, i - start), int(start) + 1,
                               int(i - start)});
      } else {
        static const std::array<std::string_view, 9> symbols = {"==", "!=", "<=", ">=", "<",
                                                               ">",  "(",  ")",  ","};
        bool matched = false;
        for (auto sym : symbols) {
          if (text.compare(i, sym.size(), sym) == 0) {
            line.tokens.push_back({Tok::Symbol, std::string(sym), int(i) + 1, int(sym.size())});
            i += sym.size();
            matched = true;
            break;
          }
        }
        if (!matched) {
          diags_.push_back(detail::make_error(
              diag::kSyntax, std::string("unexpected character '") + c + "'", span_at(i, 1)));
          return false;
        }
      }
    }
    return !line.tokens.empty();
  }

  // ---------------------------------------------------------------- helpers

  static std::string_view keyword(const Line& line) {
    const auto& first = line.tokens.front();
    return first.kind == Tok::Ident ? std::string_view(first.text) : std::string_view();
  }

  template <typename F>
  void guarded(const Line& line, F&& body) {
    try {
      body();
    } catch (const LineFailed&) {
    }
    (void)line;
  }

  struct Cursor {
    const Line& line;
    std::size_t pos = 0;

    const Token* peek() const { return pos < line.tokens.size() ? &line.tokens[pos] : nullptr; }
    bool at_end() const { return pos >= line.tokens.size(); }
    bool peek_is(Tok kind, std::string_view text) const {
      const auto* t = peek();
      return t != nullptr && t->kind == kind && t->text == text;
    }
  };

  SourceSpan span(const Line& line, const Token& tok) const {
    return SourceSpan{*line.file, line.number, tok.col, tok.len};
  }

  SourceSpan span(const Line& line, std::size_t first, std::size_t last) const {
    const auto& a = line.tokens[first];
    const auto& b = line.tokens[last];
    return SourceSpan{*line.file, line.number, a.col, b.col + b.len - a.col};
  }

  SourceSpan end_span(const Line& line) const {
    const auto& t = line.tokens.back();
    return SourceSpan{*line.file, line.number, t.col + t.len - 1, 1};
  }

  [[noreturn]] void fail(std::string_view code, std::string message, SourceSpan where) {
    diags_.push_back(detail::make_error(code, std::move(message), std::move(where)));
    throw LineFailed{};
  }

  const Token& expect(Cursor& c, Tok kind, std::string_view what) {
    const auto* t = c.peek();
    if (t == nullptr) fail(diag::kSyntax, "expected " + std::string(what), end_span(c.line));
    if (t->kind != kind) {
      fail(diag::kSyntax, "expected " + std::string(what) + ", found '" + t->text + "'",
           span(c.line, *t));
    }
    ++c.pos;
    return *t;
  }

  void expect_symbol(Cursor& c, std::string_view sym) {
    const auto* t = c.peek();
    if (t == nullptr || t->kind != Tok::Symbol || t->text != sym) {
      if (t == nullptr) fail(diag::kSyntax, "expected '" + std::string(sym) + "'", end_span(c.line));
      fail(diag::kSyntax, "expected '" + std::string(sym) + "', found '" + t->text + "'",
           span(c.line, *t));
    }
    ++c.pos;
  }

  const Token& expect_id(Cursor& c, std::string_view what) {
    const auto& t = expect(c, Tok::Ident, what);
    if (!is_parameter_name(t.text)) {
      fail(diag::kSyntax, std::string(what) + " must match [A-Z][A-Z0-9_]*, got '" + t.text + "'",
           span(c.line, t));
    }
    return t;
  }

  void expect_end(Cursor& c) {
    if (const auto* t = c.peek()) {
      fail(diag::kSyntax, "unexpected '" + t->text + "'", span(c.line, *t));
    }
  }

  int parse_int(const Cursor& c, const Token& t, std::string_view what) {
    int v = 0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.kind != Tok::Number || res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
      fail(diag::kInvalidValue, std::string(what) + " must be an integer", span(c.line, t));
    }
    return v;
  }

  // ---------------------------------------------------------------- params

  void parse_param(const Line& line) {
    Cursor c{line, 1};
    const auto& name = expect(c, Tok::Ident, "parameter name");
    if (name.text == kPhaseParam || name.text == kCheckAllDone) {
      fail(diag::kReservedName, name.text + " is reserved", span(line, name));
    }
    if (!is_parameter_name(name.text)) {
      fail(diag::kSyntax, "parameter name must match [A-Z][A-Z0-9_]*", span(line, name));
    }
    ParamDecl decl;
    decl.name = name.text;
    const auto& type = expect(c, Tok::Ident, "parameter type");
    if (type.text == "number") {
      decl.type = ParamType::Number;
    } else if (type.text == "bool") {
      decl.type = ParamType::Bool;
    } else if (type.text == "enum") {
      decl.type = ParamType::Enum;
      expect_symbol(c, "(");
      while (true) {
        const auto& label = expect_id(c, "enum label");
        if (decl.has_label(label.text)) {
          fail(diag::kDuplicateId, "duplicate label " + label.text, span(line, label));
        }
        decl.labels.push_back(label.text);
        if (c.peek_is(Tok::Symbol, ",")) {
          ++c.pos;
          continue;
        }
        expect_symbol(c, ")");
        break;
      }
    } else {
      fail(diag::kSyntax, "unknown parameter type '" + type.text + "'", span(line, type));
    }
    if (!c.at_end()) decl.unit = expect(c, Tok::Ident, "unit").text;
    expect_end(c);
    if (set_.registry.declared().count(decl.name) != 0) {
      fail(diag::kDuplicateId, "duplicate parameter " + decl.name, span(line, name));
    }
    set_.spans["param:" + decl.name] = span(line, name);
    set_.registry.declare(std::move(decl));
  }

  // ---------------------------------------------------------------- statements

  void parse_statement(const Line& line, std::string_view kw) {
    if (kw == "procedure") return parse_procedure(line);
    if (kw == "entry") return parse_entry(line);
    if (kw == "title" || kw == "iblock" || kw == "embed") {
      if (!proc_) fail(diag::kSyntax, std::string(kw) + " outside a procedure", span(line, line.tokens[0]));
      if (kw == "title") return parse_title(line);
      if (kw == "iblock") return parse_iblock(line);
      return parse_embed(line);
    }
    if (kw == "trigger" || kw == "context" || kw == "goal" || kw == "abnormal" || kw == "action" ||
        kw == "check" || kw == "note" || kw == "restriction") {
      if (!proc_ || !block_) {
        fail(diag::kSyntax, std::string(kw) + " outside an iblock", span(line, line.tokens[0]));
      }
      if (kw == "abnormal") return parse_abnormal(line);
      if (kw == "trigger" || kw == "context" || kw == "goal") return parse_clause(line, kw);
      return parse_item(line, kw);
    }
    fail(diag::kSyntax, "unknown statement '" + line.tokens[0].text + "'", span(line, line.tokens[0]));
  }

  Procedure& proc() { return set_.procedures[*proc_]; }
  IBlock& block() { return proc().iblocks[*block_]; }
  std::string block_key() { return proc().id + "." + block().id; }

  void parse_procedure(const Line& line) {
    proc_.reset();
    block_.reset();
    Cursor c{line, 1};
    const auto& id = expect_id(c, "procedure id");
    Procedure p;
    p.id = id.text;
    p.title = id.text;
    const auto& kind = expect(c, Tok::Ident, "procedure kind");
    if (kind.text == "normal") p.kind = ProcedureKind::Normal;
    else if (kind.text == "abnormal") p.kind = ProcedureKind::Abnormal;
    else if (kind.text == "emergency") p.kind = ProcedureKind::Emergency;
    else if (kind.text == "checklist") p.kind = ProcedureKind::Checklist;
    else fail(diag::kSyntax, "unknown procedure kind '" + kind.text + "'", span(line, kind));
    const auto& ph = expect(c, Tok::Ident, "'phase'");
    if (ph.text != "phase") fail(diag::kSyntax, "expected 'phase'", span(line, ph));
    const auto& phase = expect(c, Tok::Ident, "flight phase");
    auto parsed = parse_phase(phase.text);
    if (!parsed) fail(diag::kInvalidValue, "unknown flight phase " + phase.text, span(line, phase));
    p.phase = *parsed;
    while (!c.at_end()) {
      const auto& opt = expect(c, Tok::Ident, "procedure option");
      if (opt.text == "priority" && !p.priority_override) {
        const auto* t = c.peek();
        if (t == nullptr) fail(diag::kSyntax, "expected priority value", end_span(line));
        ++c.pos;
        p.priority_override = parse_int(c, *t, "priority");
      } else if (opt.text == "ecam" && !p.ecam) {
        p.ecam = true;
      } else {
        fail(diag::kSyntax, "unexpected '" + opt.text + "'", span(line, opt));
      }
    }
    if (set_.find(p.id) != nullptr) {
      // Keep parsing into the duplicate so its body does not cascade.
      diags_.push_back(detail::make_error(diag::kDuplicateId, "duplicate procedure " + p.id, span(line, id)));
    }
    set_.spans["proc:" + p.id] = span(line, id);
    set_.procedures.push_back(std::move(p));
    proc_ = set_.procedures.size() - 1;
    titled_ = false;
  }

  void parse_entry(const Line& line) {
    proc_.reset();
    block_.reset();
    Cursor c{line, 1};
    const auto& phase = expect(c, Tok::Ident, "flight phase");
    auto parsed = parse_phase(phase.text);
    if (!parsed) fail(diag::kInvalidValue, "unknown flight phase " + phase.text, span(line, phase));
    if (set_.entries.count(*parsed) != 0) {
      fail(diag::kDuplicateId, "duplicate entry table for " + phase.text, span(line, phase));
    }
    std::vector<std::string> ids;
    while (!c.at_end()) {
      const auto& id = expect_id(c, "procedure id");
      set_.spans["entry:" + phase.text + "#" + std::to_string(ids.size())] = span(line, id);
      ids.push_back(id.text);
    }
    set_.entries[*parsed] = std::move(ids);
  }

  void parse_title(const Line& line) {
    Cursor c{line, 1};
    const auto& text = expect(c, Tok::String, "quoted title");
    expect_end(c);
    if (titled_) fail(diag::kSyntax, "duplicate title", span(line, line.tokens[0]));
    titled_ = true;
    proc().title = text.text;
    set_.spans["title:" + proc().id] = span(line, text);
  }

  void parse_iblock(const Line& line) {
    Cursor c{line, 1};
    const auto& id = expect_id(c, "iblock id");
    expect_end(c);
    if (!block_ids_.insert(id.text).second) {
      fail(diag::kDuplicateId, "duplicate iblock " + id.text, span(line, id));
    }
    IBlock b;
    b.id = id.text;
    proc().iblocks.push_back(std::move(b));
    block_ = proc().iblocks.size() - 1;
    clauses_.clear();
    set_.spans["iblock:" + block_key()] = span(line, id);
  }

  void parse_embed(const Line& line) {
    Cursor c{line, 1};
    const auto& id = expect_id(c, "procedure id");
    expect_end(c);
    set_.spans["embed:" + proc().id + "#" + std::to_string(proc().embedded.size())] = span(line, id);
    proc().embedded.push_back(id.text);
  }

  void parse_clause(const Line& line, std::string_view kw) {
    if (!clauses_.insert(std::string(kw)).second) {
      fail(diag::kSyntax, "duplicate " + std::string(kw) + " clause", span(line, line.tokens[0]));
    }
    Cursor c{line, 1};
    auto [cond, where] = parse_clause_expr(c);
    expect_end(c);
    if (kw == "trigger") block().trigger = std::move(cond);
    else if (kw == "context") block().context = std::move(cond);
    else block().goal = std::move(cond);
    set_.spans[std::string(kw) + ":" + block_key()] = where;
  }

  void parse_abnormal(const Line& line) {
    Cursor c{line, 1};
    auto [cond, where] = parse_clause_expr(c);
    expect_symbol(c, "->");
    const auto& target = expect_id(c, "procedure id");
    expect_end(c);
    auto index = block().abnormal.size();
    set_.spans["abnormal:" + block_key() + "#" + std::to_string(index)] = where;
    set_.spans["abnormal-target:" + block_key() + "#" + std::to_string(index)] = span(line, target);
    block().abnormal.push_back(AbnormalLink{std::move(cond), target.text});
  }

  void parse_item(const Line& line, std::string_view kw) {
    Cursor c{line, 1};
    Action a;
    if (kw == "action") a.kind = ActionKind::Action;
    else if (kw == "check") a.kind = ActionKind::Check;
    else if (kw == "note") a.kind = ActionKind::Note;
    else a.kind = ActionKind::Restriction;
    const auto& id = expect_id(c, "item id");
    a.id = id.text;
    a.level1 = expect(c, Tok::String, "quoted level 1 text").text;
    std::string key = proc().id + "." + a.id;
    while (!c.at_end()) {
      const auto& opt = expect(c, Tok::Ident, "item option");
      if (opt.text == "level2" && !a.level2) {
        a.level2 = expect(c, Tok::String, "quoted level 2 text").text;
      } else if (opt.text == "level3" && !a.level3) {
        a.level3 = expect(c, Tok::String, "quoted level 3 text").text;
      } else if (opt.text == "detect" && !a.detect) {
        if (!is_actionable(a.kind)) {
          fail(diag::kInvalidItem, std::string(kw) + " items cannot auto-detect", span(line, opt));
        }
        auto [cond, where] = parse_clause_expr(c);
        a.detect = std::move(cond);
        set_.spans["detect:" + key] = where;
      } else if (opt.text == "applicable" && !a.applicability) {
        auto [cond, where] = parse_clause_expr(c);
        a.applicability = std::move(cond);
        set_.spans["applicable:" + key] = where;
      } else {
        fail(diag::kSyntax, "unexpected '" + opt.text + "'", span(line, opt));
      }
    }
    if (a.level1.empty()) fail(diag::kInvalidItem, "level 1 text must not be empty", span(line, id));
    if (proc().find_action(a.id) != nullptr) {
      fail(diag::kDuplicateId, "duplicate item " + a.id + " in " + proc().id, span(line, id));
    }
    set_.spans["action:" + key] = span(line, id);
    block().actions.push_back(std::move(a));
  }

  // ---------------------------------------------------------------- expressions

  std::pair<Condition, SourceSpan> parse_clause_expr(Cursor& c) {
    if (c.at_end()) fail(diag::kSyntax, "expected condition", end_span(c.line));
    std::size_t first = c.pos;
    auto cond = parse_or(c);
    return {std::move(cond), span(c.line, first, c.pos - 1)};
  }

  Condition parse_or(Cursor& c) {
    std::vector<Condition> terms;
    terms.push_back(parse_and(c));
    while (c.peek_is(Tok::Ident, "or")) {
      ++c.pos;
      terms.push_back(parse_and(c));
    }
    return terms.size() == 1 ? std::move(terms.front()) : Condition::any(std::move(terms));
  }

  Condition parse_and(Cursor& c) {
    std::vector<Condition> terms;
    terms.push_back(parse_unary(c));
    while (c.peek_is(Tok::Ident, "and")) {
      ++c.pos;
      terms.push_back(parse_unary(c));
    }
    return terms.size() == 1 ? std::move(terms.front()) : Condition::all(std::move(terms));
  }

  Condition parse_unary(Cursor& c) {
    if (c.peek_is(Tok::Ident, "not")) {
      ++c.pos;
      return Condition::negate(parse_unary(c));
    }
    return parse_primary(c);
  }

  Condition parse_primary(Cursor& c) {
    const auto* t = c.peek();
    if (t == nullptr) fail(diag::kSyntax, "expected condition", end_span(c.line));
    if (t->kind == Tok::Symbol && t->text == "(") {
      ++c.pos;
      auto inner = parse_or(c);
      expect_symbol(c, ")");
      return inner;
    }
    if (t->kind != Tok::Ident) {
      fail(diag::kSyntax, "expected condition, found '" + t->text + "'", span(c.line, *t));
    }
    if (t->text == "true") {
      ++c.pos;
      return Condition::truth();
    }
    if (t->text == "false") {
      ++c.pos;
      return Condition::falsity();
    }
    if (t->text == "sustained") {
      ++c.pos;
      const auto* n = c.peek();
      if (n == nullptr) fail(diag::kSyntax, "expected condition", end_span(c.line));
      int ticks = kDefaultSustainedTicks;
      if (n->kind == Tok::Number) {
        ++c.pos;
        ticks = parse_int(c, *n, "sustained duration");
        if (ticks < 1) fail(diag::kInvalidValue, "sustained duration must be >= 1", span(c.line, *n));
      }
      return Condition::sustained(parse_primary(c), ticks);
    }
    if (t->text == "present") {
      ++c.pos;
      expect_symbol(c, "(");
      const auto& name = expect(c, Tok::Ident, "parameter");
      require_param(c, name);
      expect_symbol(c, ")");
      return Condition::present(name.text);
    }
    ++c.pos;
    const auto& decl = require_param(c, *t);
    const auto* op_tok = c.peek();
    auto op = op_tok != nullptr && op_tok->kind == Tok::Symbol ? parse_op(op_tok->text) : std::nullopt;
    if (!op) {
      if (decl.type != ParamType::Bool) {
        fail(diag::kTypeMismatch, t->text + " is not boolean; compare it explicitly", span(c.line, *t));
      }
      return Condition::compare(t->text, CmpOp::Eq, ParamValue{true});
    }
    ++c.pos;
    const auto* rhs = c.peek();
    if (rhs == nullptr) fail(diag::kSyntax, "expected value", end_span(c.line));
    ++c.pos;
    auto where = span(c.line, *t);
    where.length = rhs->col + rhs->len - t->col;
    if (rhs->kind == Tok::Number) {
      double d = 0;
      std::from_chars(rhs->text.data(), rhs->text.data() + rhs->text.size(), d);
      return typed_const(decl, *op, ParamValue{d}, where);
    }
    if (rhs->kind == Tok::Ident && (rhs->text == "true" || rhs->text == "false")) {
      return typed_const(decl, *op, ParamValue{rhs->text == "true"}, where);
    }
    if (rhs->kind != Tok::Ident) fail(diag::kSyntax, "expected value", span(c.line, *rhs));
    if (const auto* other = set_.registry.find(rhs->text)) {
      if (auto err = detail::comparison_error(decl, *op, nullptr, other)) {
        fail(diag::kTypeMismatch, *err, where);
      }
      return Condition::compare_params(t->text, *op, rhs->text);
    }
    if (decl.type != ParamType::Enum) require_param(c, *rhs);
    return typed_const(decl, *op, ParamValue{EnumLabel{rhs->text}}, where);
  }

  Condition typed_const(const ParamDecl& decl, CmpOp op, ParamValue value, const SourceSpan& where) {
    if (auto err = detail::comparison_error(decl, op, &value, nullptr)) {
      fail(diag::kTypeMismatch, *err, where);
    }
    return Condition::compare(decl.name, op, std::move(value));
  }

  const ParamDecl& require_param(const Cursor& c, const Token& t) {
    const auto* decl = set_.registry.find(t.text);
    if (decl == nullptr) fail(diag::kUnknownParameter, "unknown parameter " + t.text, span(c.line, t));
    return *decl;
  }

  static std::optional<CmpOp> parse_op(std::string_view s) {
    if (s == "==") return CmpOp::Eq;
    if (s == "!=") return CmpOp::Ne;
    if (s == "<") return CmpOp::Lt;
    if (s == "<=") return CmpOp::Le;
    if (s == ">") return CmpOp::Gt;
    if (s == ">=") return CmpOp::Ge;
    return std::nullopt;
  }

  std::span<const Source> sources_;
  ProcedureSet set_;
  std::vector<Diagnostic> diags_;
  std::optional<std::size_t> proc_;
  std::optional<std::size_t> block_;
  std::set<std::string> block_ids_;
  std::set<std::string> clauses_;
  bool titled_ = false;
};

}  // namespace

ParseResult parse(std::span<const Source> sources) { return Parser(sources).run(); }

ParseResult parse(std::string_view text, std::string_view file) {
  Source src{std::string(file), std::string(text)};
  return parse(std::span<const Source>(&src, 1));
}

std::vector<Source> read_sources(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".ocsp" || ext == ".ocsr")) files.push_back(entry.path());
    }
    if (ec) throw Error(ErrorCode::Io, "cannot list " + path.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<Source> sources;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
    std::ostringstream text;
    text << in.rdbuf();
    sources.push_back(Source{file.string(), text.str()});
  }
  return sources;
}

}  // namespace ocsis
