// Canonical one-line text forms for refs, commands and events. Used by the
// event log, scenario files and traces.

#include <charconv>
#include <sstream>

#include "ocsis/engine.hpp"

namespace ocsis {

namespace {

std::vector<std::string> words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_id(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::optional<std::pair<std::string, std::string>> split_ref(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto a = text.substr(0, dot);
  auto b = text.substr(dot + 1);
  if (!is_id(a) || !is_id(b)) return std::nullopt;
  return std::pair{std::string(a), std::string(b)};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::optional<ActionRef> ActionRef::parse(std::string_view text) {
  auto r = split_ref(text);
  if (!r) return std::nullopt;
  return ActionRef{r->first, r->second};
}

std::optional<IBlockRef> IBlockRef::parse(std::string_view text) {
  auto r = split_ref(text);
  if (!r) return std::nullopt;
  return IBlockRef{r->first, r->second};
}

std::string format_command(const PilotCommand& command) {
  return std::visit(
      overloaded{
          [](const cmd::MarkDone& c) { return "MarkDone " + c.action.str(); },
          [](const cmd::Wait& c) { return "Wait " + c.action.str(); },
          [](const cmd::CheckAll& c) { return "CheckAll " + c.iblock.str(); },
          [](const cmd::DeferProcedure& c) { return "DeferProcedure " + c.procedure; },
          [](const cmd::OpenProcedure& c) { return "OpenProcedure " + c.procedure; },
          [](const cmd::AcknowledgePopup& c) {
            return "AcknowledgePopup " + c.procedure + (c.accept ? " accept" : " later");
          },
          [](const cmd::NavigatePhase& c) { return "NavigatePhase " + std::string(to_string(c.phase)); },
          [](const cmd::ResumeFromReminder& c) { return "ResumeFromReminder " + c.procedure; },
      },
      command);
}

std::optional<PilotCommand> parse_command(std::string_view text) {
  auto w = words(text);
  if (w.empty()) return std::nullopt;
  const auto& k = w[0];
  if (k == "AcknowledgePopup") {
    if (w.size() != 3 || !is_id(w[1])) return std::nullopt;
    if (w[2] != "accept" && w[2] != "later") return std::nullopt;
    return cmd::AcknowledgePopup{w[1], w[2] == "accept"};
  }
  if (w.size() != 2) return std::nullopt;
  const auto& arg = w[1];
  if (k == "MarkDone" || k == "Wait") {
    auto ref = ActionRef::parse(arg);
    if (!ref) return std::nullopt;
    if (k == "MarkDone") return cmd::MarkDone{*ref};
    return cmd::Wait{*ref};
  }
  if (k == "CheckAll") {
    auto ref = IBlockRef::parse(arg);
    if (!ref) return std::nullopt;
    return cmd::CheckAll{*ref};
  }
  if (k == "NavigatePhase") {
    auto phase = parse_phase(arg);
    if (!phase) return std::nullopt;
    return cmd::NavigatePhase{*phase};
  }
  if (!is_id(arg)) return std::nullopt;
  if (k == "DeferProcedure") return cmd::DeferProcedure{arg};
  if (k == "OpenProcedure") return cmd::OpenProcedure{arg};
  if (k == "ResumeFromReminder") return cmd::ResumeFromReminder{arg};
  return std::nullopt;
}

std::string_view event_kind(const EventPayload& payload) {
  static constexpr std::string_view names[] = {
      "PopupRaised",        "ReminderShown",   "ActionAutoCompleted", "ActionStatusChanged",
      "ProcedureActivated", "ProcedurePushed", "ProcedureReturned",   "ProcedureCompleted",
      "GoalReached",        "AbnormalBranch",  "StateContradiction",
  };
  return names[payload.index()];
}

std::string format_payload(const EventPayload& payload) {
  std::string out(event_kind(payload));
  out += ' ';
  out += std::visit(
      overloaded{
          [](const ev::PopupRaised& e) { return e.procedure + (e.ecam ? " ecam" : ""); },
          [](const ev::ReminderShown& e) { return e.procedure; },
          [](const ev::ActionAutoCompleted& e) { return e.action.str(); },
          [](const ev::ActionStatusChanged& e) {
            return e.action.str() + " " + std::string(to_string(e.from)) + " " + std::string(to_string(e.to));
          },
          [](const ev::ProcedureActivated& e) { return e.procedure; },
          [](const ev::ProcedurePushed& e) { return e.procedure + " " + e.parent; },
          [](const ev::ProcedureReturned& e) {
            return e.parent + " " + std::to_string(e.cursor.iblock) + " " + std::to_string(e.cursor.action);
          },
          [](const ev::ProcedureCompleted& e) { return e.procedure; },
          [](const ev::GoalReached& e) { return e.iblock.str(); },
          [](const ev::AbnormalBranch& e) { return e.iblock.str() + " " + e.target; },
          [](const ev::StateContradiction& e) { return e.action.str(); },
      },
      payload);
  return out;
}

std::optional<EventPayload> parse_payload(std::string_view text) {
  auto w = words(text);
  if (w.size() < 2) return std::nullopt;
  const auto& k = w[0];
  auto n = w.size();
  auto id = [&](std::size_t i) { return i < n && is_id(w[i]); };

  if (k == "PopupRaised") {
    if (!id(1) || n > 3 || (n == 3 && w[2] != "ecam")) return std::nullopt;
    return ev::PopupRaised{w[1], n == 3};
  }
  if (k == "ActionStatusChanged") {
    if (n != 4) return std::nullopt;
    auto ref = ActionRef::parse(w[1]);
    auto from = parse_status(w[2]);
    auto to = parse_status(w[3]);
    if (!ref || !from || !to) return std::nullopt;
    return ev::ActionStatusChanged{*ref, *from, *to};
  }
  if (k == "ProcedurePushed") {
    if (n != 3 || !id(1) || !id(2)) return std::nullopt;
    return ev::ProcedurePushed{w[1], w[2]};
  }
  if (k == "ProcedureReturned") {
    Cursor c;
    if (n != 4 || !id(1) || !parse_int(w[2], c.iblock) || !parse_int(w[3], c.action)) return std::nullopt;
    return ev::ProcedureReturned{w[1], c};
  }
  if (k == "AbnormalBranch") {
    auto ref = n == 3 ? IBlockRef::parse(w[1]) : std::nullopt;
    if (!ref || !id(2)) return std::nullopt;
    return ev::AbnormalBranch{*ref, w[2]};
  }
  if (n != 2) return std::nullopt;
  if (k == "ActionAutoCompleted" || k == "StateContradiction") {
    auto ref = ActionRef::parse(w[1]);
    if (!ref) return std::nullopt;
    if (k == "ActionAutoCompleted") return ev::ActionAutoCompleted{*ref};
    return ev::StateContradiction{*ref};
  }
  if (k == "GoalReached") {
    auto ref = IBlockRef::parse(w[1]);
    if (!ref) return std::nullopt;
    return ev::GoalReached{*ref};
  }
  if (!id(1)) return std::nullopt;
  if (k == "ReminderShown") return ev::ReminderShown{w[1]};
  if (k == "ProcedureActivated") return ev::ProcedureActivated{w[1]};
  if (k == "ProcedureCompleted") return ev::ProcedureCompleted{w[1]};
  return std::nullopt;
}

std::string format_event(const EngineEvent& event) {
  return std::to_string(event.seq) + " " + std::to_string(event.tick) + " " + format_payload(event.payload);
}

std::optional<EngineEvent> parse_event(std::string_view line) {
  auto first = line.find(' ');
  if (first == std::string_view::npos) return std::nullopt;
  auto second = line.find(' ', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  EngineEvent e;
  if (!parse_int(line.substr(0, first), e.seq)) return std::nullopt;
  if (!parse_int(line.substr(first + 1, second - first - 1), e.tick)) return std::nullopt;
  auto payload = parse_payload(line.substr(second + 1));
  if (!payload) return std::nullopt;
  e.payload = std::move(*payload);
  return e;
}

std::string_view to_string(LineKind kind) {
  switch (kind) {
    case LineKind::Action: return "action";
    case LineKind::Check: return "check";
    case LineKind::Note: return "note";
    case LineKind::Restriction: return "restriction";
    case LineKind::Link: return "link";
  }
  return "action";
}

}  // namespace ocsis
