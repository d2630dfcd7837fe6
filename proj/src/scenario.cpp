#include "ocsis/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

#include "ocsis/error.hpp"

namespace ocsis {

namespace {

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits off the first whitespace-delimited word.
std::string_view take_word(std::string_view& rest) {
  rest = trim(rest);
  auto end = rest.find_first_of(" \t");
  auto word = rest.substr(0, end);
  rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
  return word;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParamValue checked_value(std::string_view name, std::string_view text, const Registry& registry,
                         const std::string& where) {
  const auto* decl = registry.find(name);
  if (decl == nullptr || name == kPhaseParam || name == kCheckAllDone) {
    throw Error(ErrorCode::UnknownParameter, where + "unknown parameter " + std::string(name));
  }
  auto value = parse_value(text, *decl);
  if (!value) {
    throw Error(ErrorCode::ParseError, where + std::string(text) + " is not a valid " +
                                           std::string(to_string(decl->type)) + " value for " + std::string(name));
  }
  return *value;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const Registry& registry, std::string_view file) {
  Scenario out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  std::int64_t last_tick = 0;
  bool any = false;
  std::string where;
  auto fail = [&](const std::string& msg) { throw Error(ErrorCode::ParseError, where + msg); };

  while (std::getline(in, raw)) {
    ++lineno;
    where = std::string(file) + ":" + std::to_string(lineno) + ": ";
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto rest = line;
    auto head = take_word(rest);
    if (head == "scenario") {
      if (any || !out.id.empty()) fail("scenario header must come first and only once");
      out.id = std::string(take_word(rest));
      rest = trim(rest);
      if (out.id.empty() || rest.size() < 2 || rest.front() != '"' || rest.back() != '"') {
        fail("expected `scenario ID \"name\"`");
      }
      out.name = std::string(rest.substr(1, rest.size() - 2));
      continue;
    }
    if (head != "at") fail("expected `at <tick> ...`");
    std::int64_t tick = 0;
    if (!parse_int(take_word(rest), tick) || tick < 0) fail("expected a non-negative tick after `at`");
    if (any && tick < last_tick) fail("tick " + std::to_string(tick) + " goes back from " + std::to_string(last_tick));
    any = true;
    last_tick = tick;

    auto verb = take_word(rest);
    if (verb == "cmd") {
      auto command = parse_command(trim(rest));
      if (!command) fail("malformed command `" + std::string(trim(rest)) + "`");
      out.commands.push_back(ScriptedCommand{tick, *command});
      continue;
    }
    if (out.timeline.empty() || out.timeline.back().tick != tick) out.timeline.push_back(TimelineStep{tick, {}, {}});
    auto& step = out.timeline.back();
    if (verb == "set") {
      auto name = take_word(rest);
      auto value = take_word(rest);
      if (name.empty() || value.empty() || !trim(rest).empty()) fail("expected `set PARAM VALUE`");
      step.assignments.emplace_back(std::string(name), checked_value(name, value, registry, where));
    } else if (verb == "phase") {
      auto phase = parse_phase(take_word(rest));
      if (!phase || !trim(rest).empty()) fail("expected `phase PHASE`");
      step.phase = *phase;
    } else {
      fail("expected `set`, `phase` or `cmd`, got `" + std::string(verb) + "`");
    }
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& path, const Registry& registry) {
  return parse_scenario(read_file(path), registry, path.string());
}

std::optional<std::int64_t> StatePlayer::next_tick() const {
  if (done()) return std::nullopt;
  return scenario_.timeline[next_].tick;
}

FlightState StatePlayer::next() {
  const auto& step = scenario_.timeline.at(next_++);
  current_.tick = step.tick;
  if (step.phase) current_.phase = *step.phase;
  for (const auto& [name, value] : step.assignments) current_.values[name] = value;
  return current_;
}

std::string_view to_string(TraceDir dir) {
  switch (dir) {
    case TraceDir::State: return "STATE";
    case TraceDir::Command: return "COMMAND";
    case TraceDir::Event: return "EVENT";
    case TraceDir::Error: return "ERROR";
  }
  return "STATE";
}

std::string format_state(const FlightState& state) {
  std::string out = "phase=" + std::string(to_string(state.phase));
  for (const auto& [name, value] : state.values) out += " " + name + "=" + format_value(value);
  return out;
}

FlightState parse_state(std::int64_t tick, std::string_view payload, const Registry& registry) {
  FlightState s;
  s.tick = tick;
  bool phase_seen = false;
  for (auto rest = payload; !trim(rest).empty();) {
    auto word = take_word(rest);
    auto eq = word.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ParseError, "expected NAME=VALUE, got " + std::string(word));
    auto name = word.substr(0, eq);
    auto value = word.substr(eq + 1);
    if (name == "phase") {
      auto p = parse_phase(value);
      if (!p) throw Error(ErrorCode::ParseError, "unknown phase " + std::string(value));
      s.phase = *p;
      phase_seen = true;
    } else {
      s.values[std::string(name)] = checked_value(name, value, registry, "");
    }
  }
  if (!phase_seen) throw Error(ErrorCode::ParseError, "STATE record has no phase");
  return s;
}

std::string format_trace(const std::vector<TraceRecord>& trace) {
  std::string out;
  for (const auto& r : trace) {
    out += std::to_string(r.tick);
    out += ' ';
    out += to_string(r.dir);
    out += ' ';
    out += r.payload;
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> parse_trace(std::string_view text, std::string_view file) {
  std::vector<TraceRecord> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view rest = trim(raw);
    if (rest.empty()) continue;
    auto where = std::string(file) + ":" + std::to_string(lineno) + ": ";
    TraceRecord r;
    if (!parse_int(take_word(rest), r.tick)) throw Error(ErrorCode::ParseError, where + "expected a tick");
    auto dir = take_word(rest);
    if (dir == "STATE") r.dir = TraceDir::State;
    else if (dir == "COMMAND") r.dir = TraceDir::Command;
    else if (dir == "EVENT") r.dir = TraceDir::Event;
    else if (dir == "ERROR") r.dir = TraceDir::Error;
    else throw Error(ErrorCode::ParseError, where + "unknown record direction " + std::string(dir));
    r.payload = std::string(trim(rest));
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

TraceRecord event_record(const EngineEvent& e) {
  return TraceRecord{e.tick, TraceDir::Event, std::to_string(e.seq) + " " + format_payload(e.payload)};
}

}  // namespace

std::vector<TraceRecord> run_headless(const Scenario& scenario, std::shared_ptr<const ProcedureSet> set,
                                      SessionConfig config) {
  Session session(std::move(set), std::move(config));
  std::vector<TraceRecord> trace;
  StatePlayer player(scenario);
  std::size_t next_cmd = 0;

  while (!player.done() || next_cmd < scenario.commands.size()) {
    bool state_first = !player.done() && (next_cmd == scenario.commands.size() ||
                                          *player.next_tick() <= scenario.commands[next_cmd].tick);
    std::int64_t tick = 0;
    std::vector<EngineEvent> events;
    try {
      if (state_first) {
        auto state = player.next();
        tick = state.tick;
        trace.push_back(TraceRecord{tick, TraceDir::State, format_state(state)});
        events = session.apply_state(std::move(state));
      } else {
        const auto& c = scenario.commands[next_cmd++];
        tick = c.tick;
        trace.push_back(TraceRecord{tick, TraceDir::Command, format_command(c.command)});
        events = session.apply_command(c.command, c.tick);
      }
    } catch (const Error& e) {
      trace.push_back(TraceRecord{tick, TraceDir::Error, e.what()});
      break;
    }
    for (const auto& e : events) trace.push_back(event_record(e));
  }
  return trace;
}

ReplayReport replay(const std::vector<TraceRecord>& trace, std::shared_ptr<const ProcedureSet> set,
                    SessionConfig config) {
  ReplayReport report;
  Session session(set, std::move(config));
  std::deque<TraceRecord> produced;

  auto seq_of = [](const TraceRecord& r) -> std::optional<std::uint64_t> {
    std::uint64_t seq = 0;
    auto sp = r.payload.find(' ');
    if (r.dir != TraceDir::Event || !parse_int(std::string_view(r.payload).substr(0, sp), seq)) return std::nullopt;
    return seq;
  };
  auto diverge = [&](std::optional<std::uint64_t> seq, std::string msg) {
    report.ok = false;
    report.divergence_seq = seq;
    report.message = std::move(msg);
    return report;
  };
  auto line = [](const TraceRecord& r) {
    auto s = format_trace({r});
    s.pop_back();
    return s;
  };

  for (const auto& r : trace) {
    if (r.dir == TraceDir::Event || r.dir == TraceDir::Error) {
      if (produced.empty()) return diverge(seq_of(r), "trace has `" + line(r) + "` but the engine produced nothing");
      auto got = produced.front();
      produced.pop_front();
      if (got != r) {
        // The earlier of the two sequence numbers is where the streams part.
        auto seq = seq_of(r), other = seq_of(got);
        if (!seq || (other && *other < *seq)) seq = other;
        return diverge(seq, "expected `" + line(r) + "`, engine produced `" + line(got) + "`");
      }
      if (r.dir == TraceDir::Event) ++report.events;
      continue;
    }
    if (!produced.empty()) {
      return diverge(seq_of(produced.front()), "engine produced `" + line(produced.front()) + "` missing from the trace");
    }
    ++report.inputs;
    try {
      std::vector<EngineEvent> events;
      if (r.dir == TraceDir::State) {
        events = session.apply_state(parse_state(r.tick, r.payload, set->registry));
      } else {
        auto command = parse_command(r.payload);
        if (!command) return diverge(std::nullopt, "malformed command record `" + line(r) + "`");
        events = session.apply_command(*command, r.tick);
      }
      for (const auto& e : events) produced.push_back(event_record(e));
    } catch (const Error& e) {
      produced.push_back(TraceRecord{r.tick, TraceDir::Error, e.what()});
    }
  }
  if (!produced.empty()) {
    return diverge(seq_of(produced.front()), "engine produced `" + line(produced.front()) + "` missing from the trace");
  }
  return report;
}

}  // namespace ocsis
