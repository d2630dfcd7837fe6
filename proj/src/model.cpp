#include "ocsis/model.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "ocsis/error.hpp"

namespace ocsis {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidSet: return "InvalidSet";
    case ErrorCode::StaleTick: return "StaleTick";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::UnknownRef: return "UnknownRef";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::MissingEntry: return "MissingEntry";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateFailure: return "DuplicateFailure";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::MalformedFrame: return "MalformedFrame";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnknownMessageKind: return "UnknownMessageKind";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::Io: return "Io";
  }
  return "?";
}

namespace {

constexpr std::array<std::string_view, 9> kPhaseNames = {
    "COCKPIT_PREP", "TAKEOFF",          "CLIMB",          "CRUISE",    "DESCENT",
    "INITIAL_APPROACH", "FINAL_APPROACH", "LANDING", "GO_AROUND",
};

const ParamDecl& phase_decl() {
  static const ParamDecl decl = [] {
    ParamDecl d;
    d.name = std::string(kPhaseParam);
    d.type = ParamType::Enum;
    for (auto name : kPhaseNames) d.labels.emplace_back(name);
    return d;
  }();
  return decl;
}

const ParamDecl& check_all_done_decl() {
  static const ParamDecl decl{std::string(kCheckAllDone), ParamType::Bool, {}, {}};
  return decl;
}

}  // namespace

std::string_view to_string(FlightPhase phase) {
  return kPhaseNames[static_cast<std::size_t>(phase)];
}

std::optional<FlightPhase> parse_phase(std::string_view text) {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == text) return static_cast<FlightPhase>(i);
  }
  return std::nullopt;
}

bool is_parameter_name(std::string_view name) {
  if (name.empty() || name[0] < 'A' || name[0] > 'Z') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string_view to_string(ParamType type) {
  switch (type) {
    case ParamType::Number: return "number";
    case ParamType::Bool: return "bool";
    case ParamType::Enum: return "enum";
  }
  return "?";
}

bool ParamDecl::has_label(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

void Registry::declare(ParamDecl decl) {
  if (decl.name == kPhaseParam || decl.name == kCheckAllDone) {
    throw Error(ErrorCode::InvalidSet, "reserved parameter name " + decl.name);
  }
  if (!is_parameter_name(decl.name)) {
    throw Error(ErrorCode::InvalidSet, "invalid parameter name '" + decl.name + "'");
  }
  if (params_.count(decl.name) != 0) {
    throw Error(ErrorCode::InvalidSet, "duplicate parameter " + decl.name);
  }
  auto name = decl.name;
  params_.emplace(std::move(name), std::move(decl));
}

const ParamDecl* Registry::find(std::string_view name) const {
  if (name == kPhaseParam) return &phase_decl();
  if (name == kCheckAllDone) return &check_all_done_decl();
  auto it = params_.find(name);
  return it == params_.end() ? nullptr : &it->second;
}

std::string format_value(const ParamValue& value) {
  if (const auto* d = std::get_if<double>(&value)) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, *d);
    return std::string(buf, res.ptr);
  }
  if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  return std::get<EnumLabel>(value).label;
}

std::optional<ParamValue> parse_value(std::string_view text, const ParamDecl& decl) {
  switch (decl.type) {
    case ParamType::Number: {
      double d = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), d);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
      return ParamValue{d};
    }
    case ParamType::Bool:
      if (text == "true") return ParamValue{true};
      if (text == "false") return ParamValue{false};
      return std::nullopt;
    case ParamType::Enum:
      if (!decl.has_label(text)) return std::nullopt;
      return ParamValue{EnumLabel{std::string(text)}};
  }
  return std::nullopt;
}

bool value_fits(const ParamValue& value, const ParamDecl& decl) {
  switch (decl.type) {
    case ParamType::Number: return std::holds_alternative<double>(value);
    case ParamType::Bool: return std::holds_alternative<bool>(value);
    case ParamType::Enum: {
      const auto* l = std::get_if<EnumLabel>(&value);
      return l != nullptr && decl.has_label(l->label);
    }
  }
  return false;
}

const ParamValue* FlightState::find(std::string_view name) const {
  auto it = values.find(name);
  return it == values.end() ? nullptr : &it->second;
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

bool is_ordering(CmpOp op) { return op != CmpOp::Eq && op != CmpOp::Ne; }

Condition Condition::truth() { return Condition{}; }

Condition Condition::falsity() { return negate(truth()); }

Condition Condition::compare(std::string param, CmpOp op, ParamValue constant) {
  Condition c;
  c.kind = Kind::CmpConst;
  c.param = std::move(param);
  c.op = op;
  c.constant = std::move(constant);
  return c;
}

Condition Condition::compare_params(std::string lhs, CmpOp op, std::string rhs) {
  Condition c;
  c.kind = Kind::CmpParam;
  c.param = std::move(lhs);
  c.op = op;
  c.other = std::move(rhs);
  return c;
}

Condition Condition::sustained(Condition child, int ticks) {
  Condition c;
  c.kind = Kind::Sustained;
  c.duration = ticks;
  c.children.push_back(std::move(child));
  return c;
}

Condition Condition::all(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::And;
  c.children = std::move(children);
  return c;
}

Condition Condition::any(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::Or;
  c.children = std::move(children);
  return c;
}

Condition Condition::negate(Condition child) {
  Condition c;
  c.kind = Kind::Not;
  c.children.push_back(std::move(child));
  return c;
}

Condition Condition::present(std::string param) {
  Condition c;
  c.kind = Kind::Present;
  c.param = std::move(param);
  return c;
}

Condition Condition::check_all_done() {
  return compare(std::string(kCheckAllDone), CmpOp::Eq, ParamValue{true});
}

int max_sustained(const Condition& cond) {
  int best = cond.kind == Condition::Kind::Sustained ? cond.duration : 0;
  for (const auto& child : cond.children) best = std::max(best, max_sustained(child));
  return best;
}

namespace {
void collect_params(const Condition& cond, std::set<std::string>& out) {
  if (!cond.param.empty()) out.insert(cond.param);
  if (!cond.other.empty()) out.insert(cond.other);
  for (const auto& child : cond.children) collect_params(child, out);
}
}  // namespace

std::vector<std::string> referenced_parameters(const Condition& cond) {
  std::set<std::string> names;
  collect_params(cond, names);
  return {names.begin(), names.end()};
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Action: return "action";
    case ActionKind::Check: return "check";
    case ActionKind::Note: return "note";
    case ActionKind::Restriction: return "restriction";
  }
  return "?";
}

std::string_view to_string(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::Normal: return "normal";
    case ProcedureKind::Abnormal: return "abnormal";
    case ProcedureKind::Emergency: return "emergency";
    case ProcedureKind::Checklist: return "checklist";
  }
  return "?";
}

int default_priority(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::Emergency: return 0;
    case ProcedureKind::Abnormal: return 1;
    case ProcedureKind::Normal: return 2;
    case ProcedureKind::Checklist: return 3;
  }
  return 3;
}

const Action* IBlock::find_action(std::string_view action_id) const {
  for (const auto& a : actions) {
    if (a.id == action_id) return &a;
  }
  return nullptr;
}

const IBlock* Procedure::find_iblock(std::string_view block_id) const {
  for (const auto& b : iblocks) {
    if (b.id == block_id) return &b;
  }
  return nullptr;
}

const Action* Procedure::find_action(std::string_view action_id, std::size_t* iblock) const {
  for (std::size_t i = 0; i < iblocks.size(); ++i) {
    if (const auto* a = iblocks[i].find_action(action_id)) {
      if (iblock != nullptr) *iblock = i;
      return a;
    }
  }
  return nullptr;
}

const Procedure* ProcedureSet::find(std::string_view id) const {
  for (const auto& p : procedures) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::optional<std::size_t> ProcedureSet::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < procedures.size(); ++i) {
    if (procedures[i].id == id) return i;
  }
  return std::nullopt;
}

SourceSpan ProcedureSet::span_of(const std::string& key) const {
  auto it = spans.find(key);
  if (it != spans.end()) return it->second;
  return SourceSpan{"<set>", 1, 1, 0};
}

}  // namespace ocsis
