#include <doctest.h>

#include <algorithm>
#include <random>
#include <regex>

#include "ocsis/color.hpp"
#include "ocsis/error.hpp"
#include "support.hpp"

using namespace ocsis;

namespace {

std::vector<Diagnostic> errors_of(const std::string& text) { return parse(text, "t.ocsp").diagnostics; }

bool has_code(const std::vector<Diagnostic>& ds, std::string_view code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

// Column (1-based) of the n-th occurrence of `needle` on `line` (1-based).
int column_of(const std::string& text, int line, const std::string& needle) {
  std::istringstream in(text);
  std::string l;
  for (int i = 0; i < line; ++i) std::getline(in, l);
  return static_cast<int>(l.find(needle)) + 1;
}

// Link graph read straight from the source text: `procedure ID` opens a
// node, `embed ID` adds an edge. Returns the first back edge found by a
// DFS that visits nodes and edges in source order, as (line, column).
struct TextGraph {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<std::string, std::pair<int, int>>>> edges;
};

TextGraph graph_of(const std::string& text) {
  TextGraph g;
  std::istringstream in(text);
  std::string line, current;
  int lineno = 0;
  std::regex proc(R"(^\s*procedure\s+(\w+))"), embed(R"(^(\s*embed\s+)(\w+))");
  while (std::getline(in, line)) {
    ++lineno;
    std::smatch m;
    if (std::regex_search(line, m, proc)) {
      current = m[1];
      g.order.push_back(current);
      g.edges[current];
    } else if (std::regex_search(line, m, embed)) {
      g.edges[current].push_back({m[2], {lineno, static_cast<int>(m[1].length()) + 1}});
    }
  }
  return g;
}

std::optional<std::pair<int, int>> first_back_edge(const TextGraph& g) {
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::optional<std::pair<int, int>> found;
  std::function<void(const std::string&)> dfs = [&](const std::string& n) {
    color[n] = 1;
    for (const auto& [to, where] : g.edges.at(n)) {
      if (found) return;
      if (color[to] == 1) {
        found = where;
        return;
      }
      if (color[to] == 0 && g.edges.count(to)) dfs(to);
    }
    color[n] = 2;
  };
  for (const auto& n : g.order) {
    if (!found && color[n] == 0) dfs(n);
  }
  return found;
}

// Kahn's algorithm: acyclic iff every node can be removed.
bool acyclic_kahn(const TextGraph& g) {
  std::map<std::string, int> indeg;
  for (const auto& n : g.order) indeg[n];
  for (const auto& [n, es] : g.edges)
    for (const auto& e : es) ++indeg[e.first];
  std::vector<std::string> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.push_back(n);
  std::size_t removed = 0;
  while (!ready.empty()) {
    auto n = ready.back();
    ready.pop_back();
    ++removed;
    auto it = g.edges.find(n);
    if (it == g.edges.end()) continue;
    for (const auto& e : it->second)
      if (--indeg[e.first] == 0) ready.push_back(e.first);
  }
  return removed == indeg.size();
}

}  // namespace

TEST_CASE("dsl: flaps fixture parses into one normal and one abnormal procedure") {
  auto r = testing::parse_path(testing::fixture("dsl/flaps_only.ocsp"));
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  REQUIRE(r.set->procedures.size() == 2);
  const auto* set = r.set->find("FLAPS_SET");
  const auto* locked = r.set->find("FLAPS_LOCKED");
  REQUIRE(set);
  REQUIRE(locked);
  CHECK(set->kind == ProcedureKind::Normal);
  CHECK(locked->kind == ProcedureKind::Abnormal);
  const auto& block = set->iblocks.at(0);
  REQUIRE(block.trigger);
  CHECK(*block.trigger == Condition::all({Condition::present("FLAPS_POS"), Condition::present("FLAPS_HANDLE_POS")}));
  CHECK(block.goal == Condition::all({Condition::compare_params("FLAPS_POS", CmpOp::Eq, "FLAPS_HANDLE_POS"),
                                      Condition::check_all_done()}));
  REQUIRE(block.abnormal.size() == 1);
  CHECK(block.abnormal[0].target == "FLAPS_LOCKED");
  CHECK(block.abnormal[0].condition ==
        Condition::sustained(Condition::compare_params("FLAPS_POS", CmpOp::Ne, "FLAPS_HANDLE_POS"), 3));
}

TEST_CASE("dsl: empty input") {
  auto r = parse("", "empty.ocsp");
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  CHECK(r.set->procedures.empty());
  CHECK(canonical_format(*r.set) == "# ocsis procedure set v1\n");
}

TEST_CASE("dsl: embed cycle is reported at the link that closes it") {
  auto path = testing::fixture("dsl/cyclic_embed.ocsp");
  auto text = testing::slurp(path);
  auto r = testing::parse_path(path);
  CHECK_FALSE(r.ok());
  auto back = first_back_edge(graph_of(text));
  REQUIRE(back);
  auto it = std::find_if(r.diagnostics.begin(), r.diagnostics.end(),
                         [](const Diagnostic& d) { return d.code == diag::kCyclicLink; });
  REQUIRE(it != r.diagnostics.end());
  CHECK(it->severity == Severity::Error);
  CHECK(it->span.line == back->first);
  CHECK(it->span.column == back->second);
  CHECK(it->span.length == static_cast<int>(std::string("FUEL_LEAK").size()));
}

TEST_CASE("dsl: cycle detection agrees with DFS and Kahn oracles on random link graphs") {
  std::mt19937 rng(1018);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng() % 6);
    std::string text;
    for (int i = 0; i < n; ++i) {
      text += "procedure P" + std::to_string(i) + " abnormal phase CRUISE\n  iblock B" + std::to_string(i) +
              "\n    action A" + std::to_string(i) + " \"x\"\n";
      std::set<int> targets;
      for (int k = 0; k < 2; ++k) {
        if (rng() % 3 == 0) targets.insert(static_cast<int>(rng() % n));
      }
      for (int t : targets) {
        if (t != i || rng() % 4 == 0) text += "  embed P" + std::to_string(t) + "\n";
      }
    }
    auto g = graph_of(text);
    auto r = parse(text, "g.ocsp");
    bool cyclic = has_code(r.diagnostics, diag::kCyclicLink);
    INFO(text);
    CHECK(cyclic == !acyclic_kahn(g));
    auto back = first_back_edge(g);
    CHECK(cyclic == back.has_value());
    CHECK(r.ok() == !cyclic);
    if (cyclic && back) {
      auto d = std::find_if(r.diagnostics.begin(), r.diagnostics.end(),
                            [](const Diagnostic& x) { return x.code == diag::kCyclicLink; });
      CHECK(d->span.line == back->first);
    }
  }
}

TEST_CASE("dsl: sustained without a duration holds for three ticks") {
  auto set = testing::set_from(
      "param N1 number\n"
      "procedure P abnormal phase CRUISE\n"
      "  iblock B\n"
      "    trigger sustained (N1 == 0)\n"
      "    action A \"X\"\n");
  const auto& trigger = *set->procedures[0].iblocks[0].trigger;
  CHECK(trigger.kind == Condition::Kind::Sustained);
  CHECK(trigger.duration == 3);
  CHECK(canonical_format(*set).find("sustained 3 (N1 == 0)") != std::string::npos);
}

TEST_CASE("dsl: errors carry accurate spans") {
  SUBCASE("unknown parameter") {
    std::string t = "param X number\nprocedure P normal phase CRUISE\n  iblock B\n    trigger (Y > 3)\n    action A \"x\"\n";
    auto ds = errors_of(t);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].code == diag::kUnknownParameter);
    CHECK(ds[0].span.line == 4);
    CHECK(ds[0].span.column == column_of(t, 4, "Y"));
    CHECK(ds[0].span.length == 1);
    CHECK(ds[0].span.file == "t.ocsp");
  }
  SUBCASE("type mismatch") {
    std::string t = "param X number\nparam F bool\nprocedure P normal phase CRUISE\n  iblock B\n"
                    "    trigger (X == true)\n    context (F > 3)\n    action A \"x\"\n";
    auto ds = errors_of(t);
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].code == diag::kTypeMismatch);
    CHECK(ds[0].span.line == 5);
    CHECK(ds[1].code == diag::kTypeMismatch);
    CHECK(ds[1].span.line == 6);
  }
  SUBCASE("duplicate id") {
    std::string t = "procedure P normal phase CRUISE\n  iblock B\n    action A \"x\"\n"
                    "procedure P normal phase CRUISE\n  iblock C\n    action D \"x\"\n";
    auto ds = errors_of(t);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].code == diag::kDuplicateId);
    CHECK(ds[0].span.line == 4);
    CHECK(ds[0].span.column == column_of(t, 4, "P "));
  }
  SUBCASE("duplicate action across procedures") {
    std::string t = "procedure P normal phase CRUISE\n  iblock B\n    action A \"x\"\n"
                    "procedure Q normal phase CRUISE\n  iblock C\n    action A \"y\"\n";
    CHECK(has_code(errors_of(t), diag::kDuplicateId) == false);
    std::string u = "procedure P normal phase CRUISE\n  iblock B\n    action A \"x\"\n    action A \"y\"\n";
    CHECK(has_code(errors_of(u), diag::kDuplicateId));
  }
  SUBCASE("dangling links") {
    std::string t = "procedure P normal phase CRUISE\n  iblock B\n    action A \"x\"\n"
                    "    abnormal true -> GHOST\n  embed NOPE\n";
    auto ds = errors_of(t);
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].code == diag::kDanglingLink);
    CHECK(ds[0].span.line == 4);
    CHECK(ds[0].span.column == column_of(t, 4, "GHOST"));
    CHECK(ds[1].code == diag::kDanglingLink);
    CHECK(ds[1].span.line == 5);
    CHECK(ds[1].span.column == column_of(t, 5, "NOPE"));
  }
  SUBCASE("syntax") {
    std::string t = "procedure P normal phase CRUISE\n  iblock B\n    action A \"x\" levle2 \"y\"\n";
    auto ds = errors_of(t);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].code == diag::kSyntax);
    CHECK(ds[0].span.column == column_of(t, 3, "levle2"));
    CHECK(render(ds[0]).rfind("t.ocsp:3:", 0) == 0);
  }
  SUBCASE("unterminated string") { CHECK(has_code(errors_of("procedure P normal phase CRUISE\n  title \"abc\n"), diag::kSyntax)); }
  SUBCASE("procedure without iblock") {
    CHECK(has_code(errors_of("procedure P normal phase CRUISE\n"), diag::kEmptyProcedure));
  }
  SUBCASE("reserved names") { CHECK(has_code(errors_of("param PHASE number\n"), diag::kReservedName)); }
  SUBCASE("unknown phase") { CHECK(has_code(errors_of("procedure P normal phase ORBIT\n  iblock B\n    action A \"x\"\n"), diag::kInvalidValue)); }
  SUBCASE("never both a set and errors") {
    auto r = parse("procedure P normal phase CRUISE\n", "t.ocsp");
    CHECK_FALSE(r.ok());
    CHECK(has_errors(r.diagnostics));
  }
}

TEST_CASE("dsl: parameters may be declared after use and in another file") {
  std::vector<Source> sources = {
      {"a.ocsp", "procedure P normal phase CRUISE\n  iblock B\n    action A \"x\" detect (LATE == 1)\n"},
      {"b.ocsr", "param LATE number\n"}};
  auto r = parse(sources);
  CHECK(r.ok());
}

TEST_CASE("dsl: three information levels survive parsing") {
  auto set = testing::load_set(testing::fixture("dsl/levels.ocsp"));
  std::size_t block = 0;
  const auto* apu = set->find("APU_START");
  REQUIRE(apu);
  const auto* bleed = apu->find_action("APU_BLEED", &block);
  const auto* master = apu->find_action("APU_MASTER", &block);
  REQUIRE(bleed);
  REQUIRE(master);
  CHECK(info_text(*bleed, 1) == std::optional<std::string>("APU BLEED ON"));
  CHECK_FALSE(info_text(*bleed, 2));
  CHECK(info_text(*master, 2) == std::optional<std::string>("Wait for the AVAIL light"));
  CHECK(info_text(*master, 3) ==
        std::optional<std::string>(
            "If AVAIL does not come on within 2 min, select OFF and refer to the APU AUTO SHUTDOWN procedure"));
}

TEST_CASE("dsl: lint") {
  SUBCASE("constant trigger on an abnormal procedure") {
    auto set = testing::load_set(testing::fixture("dsl/always_triggers.ocsp"));
    auto ws = lint(*set);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].code == diag::kAlwaysTriggers);
    CHECK(ws[0].severity == Severity::Warning);
  }
  SUBCASE("unsatisfiable goal, checked against domain enumeration") {
    auto set = testing::load_set(testing::fixture("dsl/unsat_goal.ocsp"));
    // Oracle: try every label of X, plus absence.
    const auto& goal = set->procedures[0].iblocks[0].goal;
    bool satisfiable = false;
    for (std::optional<std::string> x : {std::optional<std::string>("A"), std::optional<std::string>("B"),
                                         std::optional<std::string>()}) {
      FlightState s;
      if (x) s.values["X"] = EnumLabel{*x};
      for (bool done : {false, true}) {
        if (eval_condition(goal, std::span(&s, 1), set->registry, EvalContext{done}) == TriState::True) satisfiable = true;
      }
    }
    CHECK_FALSE(satisfiable);
    auto ws = lint(*set);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].code == diag::kUnsatisfiable);
    CHECK(ws[0].span.line == 6);
  }
  SUBCASE("label outside the parameter domain") {
    auto set = testing::set_from("param X enum(A,B)\nprocedure P normal phase CRUISE\n  iblock B\n"
                                 "    action A1 \"x\" detect (X == C)\n");
    auto ws = lint(*set);
    CHECK(has_code(ws, diag::kLabelOutOfDomain));
  }
  SUBCASE("large domains are skipped with a note") {
    std::string t;
    for (int i = 0; i < 6; ++i) t += "param E" + std::to_string(i) + " enum(A,B,C,D,E,F,G,H,I,J)\n";
    t += "procedure P normal phase CRUISE\n  iblock B\n    action A1 \"x\"\n    goal (E0 == A) and (E1 == A) and "
         "(E2 == A) and (E3 == A) and (E4 == A) and (E5 == A)\n";
    auto ws = lint(*testing::set_from(t));
    CHECK(has_code(ws, diag::kSatisfiabilitySkipped));
    CHECK_FALSE(has_code(ws, diag::kUnsatisfiable));
  }
  SUBCASE("clean fixture set") { CHECK(lint(*testing::a320()).empty()); }
}

TEST_CASE("dsl: parse, format, parse round-trips the corpus and formatting is idempotent") {
  for (const auto& path : testing::valid_corpus()) {
    INFO(path.string());
    auto first = testing::parse_path(path);
    REQUIRE(first.ok());
    auto text = canonical_format(*first.set);
    auto second = parse(text, "formatted.ocsp");
    REQUIRE(second.ok());
    CHECK(*second.set == *first.set);
    CHECK(canonical_format(*second.set) == text);
    CHECK(content_hash(*second.set) == content_hash(*first.set));
  }
}

TEST_CASE("dsl: content hash") {
  auto a = testing::a320();
  auto b = testing::load_set(testing::fixture("dsl/flaps_only.ocsp"));
  CHECK(content_hash(*a).size() == 64);
  CHECK(content_hash(*a) == content_hash(*testing::load_set(testing::fixture("a320"))));
  CHECK(content_hash(*a) != content_hash(*b));
  // SHA-256 of the empty set's canonical text, computed independently.
  auto empty = testing::set_from("");
  CHECK(content_hash(*empty) == "f0b26e74e89f4ac281c4f62e2df491541273a7453db995a7a15d2431b485eada");
}

TEST_CASE("dsl: validate on a set built in memory") {
  ProcedureSet set;
  Procedure p;
  p.id = "P";
  IBlock b;
  b.id = "B";
  Action a;
  a.id = "A";
  a.level1 = "x";
  a.detect = Condition::compare("MISSING", CmpOp::Eq, 1.0);
  b.actions.push_back(a);
  p.iblocks.push_back(b);
  p.embedded.push_back("NOWHERE");
  set.procedures.push_back(p);
  auto ds = validate(set);
  CHECK(has_code(ds, diag::kUnknownParameter));
  CHECK(has_code(ds, diag::kDanglingLink));
}

TEST_CASE("dsl: reading sources") {
  auto sources = read_sources(testing::fixture("a320"));
  REQUIRE(sources.size() == 4);
  CHECK(std::is_sorted(sources.begin(), sources.end(), [](const Source& x, const Source& y) { return x.name < y.name; }));
  try {
    read_sources(testing::fixture("does/not/exist.ocsp"));
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}
