#pragma once

// Domain types shared by every layer: parameters, flight state, condition
// trees, iBlocks and procedures.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ocsis {

enum class FlightPhase {
  CockpitPrep,
  Takeoff,
  Climb,
  Cruise,
  Descent,
  InitialApproach,
  FinalApproach,
  Landing,
  GoAround,
};

inline constexpr std::array<FlightPhase, 9> kAllPhases = {
    FlightPhase::CockpitPrep,     FlightPhase::Takeoff,       FlightPhase::Climb,
    FlightPhase::Cruise,          FlightPhase::Descent,       FlightPhase::InitialApproach,
    FlightPhase::FinalApproach,   FlightPhase::Landing,       FlightPhase::GoAround,
};

std::string_view to_string(FlightPhase phase);
std::optional<FlightPhase> parse_phase(std::string_view text);

// Pseudo-parameters resolved by the evaluator rather than read from state.
inline constexpr std::string_view kPhaseParam = "PHASE";
inline constexpr std::string_view kCheckAllDone = "CHECK_ALL_DONE";

bool is_parameter_name(std::string_view name);

// ---------------------------------------------------------------------------
// Parameters and values

enum class ParamType { Number, Bool, Enum };

std::string_view to_string(ParamType type);

struct ParamDecl {
  std::string name;
  ParamType type = ParamType::Number;
  std::vector<std::string> labels;  // Enum only, declaration order
  std::string unit;

  bool has_label(std::string_view label) const;
  bool operator==(const ParamDecl&) const = default;
};

class Registry {
 public:
  // Throws Error(InvalidSet) on a duplicate or reserved name.
  void declare(ParamDecl decl);

  // Declared parameters plus the PHASE and CHECK_ALL_DONE pseudo-parameters.
  const ParamDecl* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const std::map<std::string, ParamDecl, std::less<>>& declared() const { return params_; }
  bool empty() const { return params_.empty(); }

  bool operator==(const Registry&) const = default;

 private:
  std::map<std::string, ParamDecl, std::less<>> params_;
};

struct EnumLabel {
  std::string label;
  auto operator<=>(const EnumLabel&) const = default;
};

using ParamValue = std::variant<double, bool, EnumLabel>;

std::string format_value(const ParamValue& value);
// Parses a literal against the declared type; nullopt when it does not fit.
std::optional<ParamValue> parse_value(std::string_view text, const ParamDecl& decl);
bool value_fits(const ParamValue& value, const ParamDecl& decl);

struct FlightState {
  std::int64_t tick = 0;
  FlightPhase phase = FlightPhase::CockpitPrep;
  std::map<std::string, ParamValue, std::less<>> values;

  const ParamValue* find(std::string_view name) const;
  bool operator==(const FlightState&) const = default;
};

// ---------------------------------------------------------------------------
// Conditions

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CmpOp op);
bool is_ordering(CmpOp op);

struct Condition {
  enum class Kind { True, CmpConst, CmpParam, Sustained, And, Or, Not, Present };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  std::string param;
  std::string other;       // CmpParam right-hand side
  ParamValue constant{0.0};
  int duration = 0;        // Sustained only
  std::vector<Condition> children;

  static Condition truth();
  static Condition falsity();  // Not(True)
  static Condition compare(std::string param, CmpOp op, ParamValue constant);
  static Condition compare_params(std::string lhs, CmpOp op, std::string rhs);
  static Condition sustained(Condition child, int ticks);
  static Condition all(std::vector<Condition> children);
  static Condition any(std::vector<Condition> children);
  static Condition negate(Condition child);
  static Condition present(std::string param);
  static Condition check_all_done();

  bool operator==(const Condition&) const = default;
};

// Duration used when `sustained` is written without one.
inline constexpr int kDefaultSustainedTicks = 3;

// Largest Sustained duration in the tree, 0 if none.
int max_sustained(const Condition& cond);
// Every parameter name referenced, sorted and unique.
std::vector<std::string> referenced_parameters(const Condition& cond);

// ---------------------------------------------------------------------------
// Procedures

enum class ActionKind { Action, Check, Note, Restriction };
std::string_view to_string(ActionKind kind);

// Notes and restrictions are informational and never carry a status change.
inline bool is_actionable(ActionKind kind) {
  return kind == ActionKind::Action || kind == ActionKind::Check;
}

struct Action {
  std::string id;
  ActionKind kind = ActionKind::Action;
  std::string level1;
  std::optional<std::string> level2;
  std::optional<std::string> level3;
  std::optional<Condition> detect;
  std::optional<Condition> applicability;

  bool operator==(const Action&) const = default;
};

struct AbnormalLink {
  Condition condition;
  std::string target;

  bool operator==(const AbnormalLink&) const = default;
};

struct IBlock {
  std::string id;
  std::vector<Action> actions;
  // Absent: the block never raises its procedure on its own.
  std::optional<Condition> trigger;
  Condition context = Condition::truth();
  Condition goal = Condition::check_all_done();
  std::vector<AbnormalLink> abnormal;

  const Action* find_action(std::string_view id) const;
  bool operator==(const IBlock&) const = default;
};

enum class ProcedureKind { Normal, Abnormal, Emergency, Checklist };
std::string_view to_string(ProcedureKind kind);

int default_priority(ProcedureKind kind);

struct Procedure {
  std::string id;
  std::string title;
  ProcedureKind kind = ProcedureKind::Normal;
  FlightPhase phase = FlightPhase::CockpitPrep;
  std::vector<IBlock> iblocks;
  std::vector<std::string> embedded;
  std::optional<int> priority_override;
  bool ecam = false;  // also announced on the simulated ECAM channel

  int priority() const {
    return priority_override ? *priority_override : default_priority(kind);
  }
  const IBlock* find_iblock(std::string_view id) const;
  // Searches every iBlock; returns the owning block index through `iblock`.
  const Action* find_action(std::string_view id, std::size_t* iblock = nullptr) const;

  bool operator==(const Procedure&) const = default;
};

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct ProcedureSet {
  Registry registry;
  std::vector<Procedure> procedures;
  std::map<FlightPhase, std::vector<std::string>> entries;

  // Where each construct was declared, keyed by "proc:ID", "iblock:P.B",
  // "action:P.A", "trigger:P.B", "goal:P.B", ... Not part of equality.
  std::map<std::string, SourceSpan> spans;

  const Procedure* find(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;
  SourceSpan span_of(const std::string& key) const;

  // Structural equality: spans are ignored.
  friend bool operator==(const ProcedureSet& a, const ProcedureSet& b) {
    return a.registry == b.registry && a.procedures == b.procedures && a.entries == b.entries;
  }
};

}  // namespace ocsis
