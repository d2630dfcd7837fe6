#pragma once

// Scripted flight-state timelines (`.ocss`), the headless runner and trace
// replay.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocsis/engine.hpp"

namespace ocsis {

struct TimelineStep {
  std::int64_t tick = 0;
  std::vector<std::pair<std::string, ParamValue>> assignments;
  std::optional<FlightPhase> phase;

  bool operator==(const TimelineStep&) const = default;
};

struct ScriptedCommand {
  std::int64_t tick = 0;
  PilotCommand command;

  bool operator==(const ScriptedCommand&) const = default;
};

struct Scenario {
  std::string id;
  std::string name;
  std::vector<TimelineStep> timeline;  // one step per distinct tick, ascending
  std::vector<ScriptedCommand> commands;

  bool operator==(const Scenario&) const = default;
};

// Lines: `scenario ID "name"`, `at T set PARAM VALUE`, `at T phase PHASE`,
// `at T cmd COMMAND...`; `#` comments. Ticks may not decrease.
// Throws Error(ParseError) with the line, Error(UnknownParameter).
Scenario parse_scenario(std::string_view text, const Registry& registry, std::string_view file = "<input>");
Scenario load_scenario(const std::filesystem::path& path, const Registry& registry);

// Folds timeline steps into full flight states: assignments persist until
// overwritten, the phase until the next phase change.
class StatePlayer {
 public:
  explicit StatePlayer(const Scenario& scenario) : scenario_(scenario) {}

  bool done() const { return next_ >= scenario_.timeline.size(); }
  std::optional<std::int64_t> next_tick() const;
  FlightState next();

 private:
  const Scenario& scenario_;
  std::size_t next_ = 0;
  FlightState current_;
};

enum class TraceDir { State, Command, Event, Error };
std::string_view to_string(TraceDir dir);

struct TraceRecord {
  std::int64_t tick = 0;
  TraceDir dir = TraceDir::State;
  std::string payload;

  bool operator==(const TraceRecord&) const = default;
};

// STATE payload: `phase=PHASE NAME=VALUE ...`, names sorted.
std::string format_state(const FlightState& state);
// Throws Error(ParseError) or Error(UnknownParameter).
FlightState parse_state(std::int64_t tick, std::string_view payload, const Registry& registry);

// `tick DIR payload`, one per line.
std::string format_trace(const std::vector<TraceRecord>& trace);
// Throws Error(ParseError) with the line.
std::vector<TraceRecord> parse_trace(std::string_view text, std::string_view file = "<trace>");

// Feeds the timeline and the scripted commands to a fresh session (STATE
// before COMMAND at equal ticks). An engine error becomes an ERROR record
// and ends the run.
std::vector<TraceRecord> run_headless(const Scenario& scenario, std::shared_ptr<const ProcedureSet> set,
                                      SessionConfig config = {});

struct ReplayReport {
  bool ok = true;
  std::size_t inputs = 0;       // STATE and COMMAND records applied
  std::size_t events = 0;       // EVENT records matched
  std::optional<std::uint64_t> divergence_seq;
  std::string message;          // first divergence, empty when ok
};

// Re-executes STATE and COMMAND records and checks every EVENT and ERROR
// record against what the engine produces.
ReplayReport replay(const std::vector<TraceRecord>& trace, std::shared_ptr<const ProcedureSet> set,
                    SessionConfig config = {});

}  // namespace ocsis
