#pragma once

// Deterministic procedure execution engine.
//
// A Session consumes one ordered stream of flight states and pilot commands
// and answers each with the events it caused. It is single-writer: callers
// that receive input from several sources (network, pacing clock) must
// serialise them before calling in.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ocsis/color.hpp"
#include "ocsis/condition.hpp"
#include "ocsis/model.hpp"
#include "ocsis/perf.hpp"

namespace ocsis {

struct ActionRef {
  std::string procedure;
  std::string action;

  std::string str() const { return procedure + "." + action; }
  static std::optional<ActionRef> parse(std::string_view text);
  auto operator<=>(const ActionRef&) const = default;
};

struct IBlockRef {
  std::string procedure;
  std::string iblock;

  std::string str() const { return procedure + "." + iblock; }
  static std::optional<IBlockRef> parse(std::string_view text);
  auto operator<=>(const IBlockRef&) const = default;
};

// ---------------------------------------------------------------------------
// Pilot commands

namespace cmd {
struct MarkDone { ActionRef action; bool operator==(const MarkDone&) const = default; };
struct Wait { ActionRef action; bool operator==(const Wait&) const = default; };
struct CheckAll { IBlockRef iblock; bool operator==(const CheckAll&) const = default; };
struct DeferProcedure { std::string procedure; bool operator==(const DeferProcedure&) const = default; };
struct OpenProcedure { std::string procedure; bool operator==(const OpenProcedure&) const = default; };
struct AcknowledgePopup {
  std::string procedure;
  bool accept = true;  // false: "later"
  bool operator==(const AcknowledgePopup&) const = default;
};
struct NavigatePhase { FlightPhase phase; bool operator==(const NavigatePhase&) const = default; };
struct ResumeFromReminder { std::string procedure; bool operator==(const ResumeFromReminder&) const = default; };
}  // namespace cmd

using PilotCommand = std::variant<cmd::MarkDone, cmd::Wait, cmd::CheckAll, cmd::DeferProcedure,
                                  cmd::OpenProcedure, cmd::AcknowledgePopup, cmd::NavigatePhase,
                                  cmd::ResumeFromReminder>;

// `MarkDone FLAPS_LOCKED.FLK_A1`, `AcknowledgePopup FUEL_LEAK later`, ...
std::string format_command(const PilotCommand& command);
std::optional<PilotCommand> parse_command(std::string_view text);

// ---------------------------------------------------------------------------
// Engine events

struct Cursor {
  std::size_t iblock = 0;
  std::size_t action = 0;
  bool operator==(const Cursor&) const = default;
};

namespace ev {
struct PopupRaised {
  std::string procedure;
  bool ecam = false;  // also raised on the simulated ECAM channel
  bool operator==(const PopupRaised&) const = default;
};
struct ReminderShown { std::string procedure; bool operator==(const ReminderShown&) const = default; };
struct ActionAutoCompleted { ActionRef action; bool operator==(const ActionAutoCompleted&) const = default; };
struct ActionStatusChanged {
  ActionRef action;
  ActionStatus from = ActionStatus::ToDo;
  ActionStatus to = ActionStatus::ToDo;
  bool operator==(const ActionStatusChanged&) const = default;
};
struct ProcedureActivated { std::string procedure; bool operator==(const ProcedureActivated&) const = default; };
struct ProcedurePushed {
  std::string procedure;
  std::string parent;
  bool operator==(const ProcedurePushed&) const = default;
};
struct ProcedureReturned {
  std::string parent;
  Cursor cursor;
  bool operator==(const ProcedureReturned&) const = default;
};
struct ProcedureCompleted { std::string procedure; bool operator==(const ProcedureCompleted&) const = default; };
struct GoalReached { IBlockRef iblock; bool operator==(const GoalReached&) const = default; };
struct AbnormalBranch {
  IBlockRef iblock;
  std::string target;
  bool operator==(const AbnormalBranch&) const = default;
};
// Warning: sensed state contradicts an action already marked done.
struct StateContradiction { ActionRef action; bool operator==(const StateContradiction&) const = default; };
}  // namespace ev

using EventPayload =
    std::variant<ev::PopupRaised, ev::ReminderShown, ev::ActionAutoCompleted, ev::ActionStatusChanged,
                 ev::ProcedureActivated, ev::ProcedurePushed, ev::ProcedureReturned,
                 ev::ProcedureCompleted, ev::GoalReached, ev::AbnormalBranch, ev::StateContradiction>;

struct EngineEvent {
  std::uint64_t seq = 0;
  std::int64_t tick = 0;
  EventPayload payload;

  bool operator==(const EngineEvent&) const = default;
};

std::string_view event_kind(const EventPayload& payload);
// `KIND field...` without seq/tick.
std::string format_payload(const EventPayload& payload);
std::optional<EventPayload> parse_payload(std::string_view text);
// Event-log line: `seq tick KIND field...`
std::string format_event(const EngineEvent& event);
std::optional<EngineEvent> parse_event(std::string_view line);

// ---------------------------------------------------------------------------
// Display projection

enum class LineKind { Action, Check, Note, Restriction, Link };
std::string_view to_string(LineKind kind);

struct DisplayLine {
  LineKind kind = LineKind::Action;
  std::string ref;  // "PROC.ITEM" for items, target procedure id for links
  std::string text;
  ColorCode color = ColorCode::White;
  std::optional<ActionStatus> status;
  std::optional<std::string> level2;
  std::optional<std::string> level3;
  bool focused = false;
  bool operator==(const DisplayLine&) const = default;
};

struct IBlockView {
  std::string id;
  bool current = false;
  bool completed = false;
  std::vector<DisplayLine> lines;
  bool operator==(const IBlockView&) const = default;
};

struct ProcedureView {
  std::string id;
  std::string title;
  ProcedureKind kind = ProcedureKind::Normal;
  ColorCode title_color = ColorCode::White;
  bool active = false;
  std::vector<IBlockView> iblocks;
  std::vector<DisplayLine> links;
  bool operator==(const ProcedureView&) const = default;
};

struct PhaseTab {
  FlightPhase phase;
  bool selected = false;
  bool current_flight_phase = false;
  bool operator==(const PhaseTab&) const = default;
};

struct PopupView {
  std::string procedure;
  std::string title;
  ColorCode color = ColorCode::Amber;
  bool ecam = false;
  std::size_t queued = 0;  // further pop-ups waiting behind this one
  bool operator==(const PopupView&) const = default;
};

struct ReminderView {
  std::string procedure;
  std::string title;
  ColorCode color = ColorCode::Amber;
  bool operator==(const ReminderView&) const = default;
};

struct DisplayModel {
  std::int64_t tick = 0;
  FlightPhase page = FlightPhase::CockpitPrep;
  FlightPhase flight_phase = FlightPhase::CockpitPrep;
  ColorCode page_title_color = ColorCode::White;
  std::vector<PhaseTab> menu;
  std::optional<ProcedureView> active;
  std::vector<ProcedureView> page_procedures;
  std::optional<PopupView> popup;
  std::vector<ReminderView> reminder_bar;
  std::vector<std::string> stack;  // bottom first
  bool operator==(const DisplayModel&) const = default;
};

// ---------------------------------------------------------------------------
// Session

struct PerfSettings {
  double vref = 0;
  double reference_landing_distance = 0;
  std::vector<CorrectionEntry> table;
};

struct SessionConfig {
  std::size_t min_history = 16;
  // When set, `{VAPP}` and `{LDG_DIST}` in item text are replaced with
  // values corrected for the abnormal procedures run so far.
  std::optional<PerfSettings> perf;
};

struct Frame {
  std::string procedure;
  Cursor cursor;
  bool operator==(const Frame&) const = default;
};

struct DeferredEntry {
  std::string procedure;
  std::optional<Cursor> saved;  // set when deferred mid-execution
  bool reminder = true;
  bool operator==(const DeferredEntry&) const = default;
};

struct Snapshot {
  std::string blob;  // JSON text, see docs/snapshot.md
  bool operator==(const Snapshot&) const = default;
};

inline constexpr int kSnapshotVersion = 1;

class Session {
 public:
  // Throws Error(InvalidSet) if `set` does not validate.
  explicit Session(std::shared_ptr<const ProcedureSet> set, SessionConfig config = {});

  // Throws Error(StaleTick) if state.tick does not advance, Error(InvalidState)
  // for unregistered parameters or ill-typed values. The session is unchanged
  // when an error is thrown.
  std::vector<EngineEvent> apply_state(FlightState state);

  // `tick` defaults to the current tick and may not go backwards.
  // Throws Error(UnknownRef), Error(IllegalTransition) or Error(StaleTick);
  // the session is unchanged when an error is thrown.
  std::vector<EngineEvent> apply_command(const PilotCommand& command,
                                         std::optional<std::int64_t> tick = std::nullopt);

  DisplayModel display_model() const;

  Snapshot snapshot() const;
  // Throws Error(HashMismatch) or Error(VersionUnsupported).
  static Session restore(std::shared_ptr<const ProcedureSet> set, const Snapshot& snap,
                         SessionConfig config = {});

  const ProcedureSet& procedures() const { return *set_; }
  const std::string& set_hash() const { return set_hash_; }
  std::int64_t tick() const { return now_; }
  const std::vector<FlightState>& history() const { return history_; }
  ActionStatus status(const ActionRef& ref) const;
  const std::vector<Frame>& stack() const { return stack_; }
  const std::vector<DeferredEntry>& deferred() const { return deferred_; }
  const std::vector<std::string>& pending_popups() const { return pending_; }
  const std::vector<EngineEvent>& event_log() const { return log_; }
  FlightPhase page() const { return page_; }
  std::size_t history_bound() const { return history_bound_; }

  // One `seq tick KIND fields` line per event.
  std::string export_log() const;

 private:
  enum class ProcState { Idle, Pending, Active, Deferred };

  struct ProcRuntime {
    ProcState state = ProcState::Idle;
    bool armed = true;      // trigger may raise a pop-up
    bool completed = false; // has completed at least once
    bool activated = false; // has been on the stack at least once
    bool operator==(const ProcRuntime&) const = default;
  };

  Session(std::shared_ptr<const ProcedureSet> set, SessionConfig config, std::string hash);

  std::vector<EngineEvent> since(std::size_t mark) const;
  void emit(EventPayload payload);
  const Procedure& proc(const std::string& id) const;
  std::size_t decl_index(const std::string& id) const;
  ActionStatus& status_ref(const ActionRef& ref);
  void set_status(const ActionRef& ref, ActionStatus to);
  bool check_all_done(const Procedure& p, const IBlock& b) const;
  TriState eval(const Condition& c, std::optional<bool> check_all = std::nullopt) const;

  void update_applicability();
  void auto_detect(const Frame& frame);
  void advance();
  void evaluate_abnormal_branches();
  void evaluate_triggers();
  void raise_popups(std::vector<std::string> ids);
  void activate(const std::string& id, std::optional<Cursor> saved);
  void refresh_cursor(Frame& frame) const;
  bool in_display_context(const std::string& procedure) const;
  std::vector<std::string> page_procedure_ids(FlightPhase phase) const;
  ProcedureView view_of(const Procedure& p, bool active) const;
  std::string render_text(const std::string& text) const;

  std::shared_ptr<const ProcedureSet> set_;
  SessionConfig config_;
  std::string set_hash_;
  std::size_t history_bound_ = 16;

  std::int64_t now_ = 0;
  std::optional<std::int64_t> last_state_tick_;
  std::vector<FlightState> history_;
  std::map<ActionRef, ActionStatus> statuses_;
  std::map<std::string, ProcRuntime> runtime_;
  std::vector<Frame> stack_;
  std::vector<DeferredEntry> deferred_;
  std::vector<std::string> pending_;  // sorted by (priority, declaration order)
  std::set<std::string> branch_latch_;     // "P.B#i" currently true
  std::set<ActionRef> contradiction_latch_;
  FlightPhase page_ = FlightPhase::CockpitPrep;
  std::map<FlightPhase, std::string> page_focus_;
  std::uint64_t next_seq_ = 1;
  std::vector<EngineEvent> log_;

  friend struct SnapshotCodec;
};

}  // namespace ocsis
