#include "ocsis/protocol.hpp"

#include "json_values.hpp"
#include "ocsis/error.hpp"

namespace ocsis {

using detail::Json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void malformed(const std::string& msg) { throw Error(ErrorCode::MalformedFrame, msg); }

std::string str(std::string_view s) { return std::string(s); }

// Field access that reports schema violations as MalformedFrame.
const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) malformed(std::string("missing field `") + name + "`");
  return *it;
}

std::string text_field(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) malformed(std::string("field `") + name + "` must be a string");
  return v.get<std::string>();
}

bool bool_field(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_boolean()) malformed(std::string("field `") + name + "` must be a boolean");
  return v.get<bool>();
}

template <typename Int>
Int int_field(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) malformed(std::string("field `") + name + "` must be an integer");
  return v.get<Int>();
}

std::optional<std::string> opt_text(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) malformed(std::string("field `") + name + "` must be a string or null");
  return v.get<std::string>();
}

template <typename T, typename Parse>
T enum_field(const Json& j, const char* name, Parse parse) {
  auto text = text_field(j, name);
  auto v = parse(text);
  if (!v) malformed("bad value `" + text + "` for `" + name + "`");
  return *v;
}

const Json& array_field(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_array()) malformed(std::string("field `") + name + "` must be an array");
  return v;
}

ActionRef action_field(const Json& j, const char* name) {
  return enum_field<ActionRef>(j, name, ActionRef::parse);
}

IBlockRef iblock_field(const Json& j, const char* name) {
  return enum_field<IBlockRef>(j, name, IBlockRef::parse);
}

std::optional<ProcedureKind> parse_kind(std::string_view s) {
  for (auto k : {ProcedureKind::Normal, ProcedureKind::Abnormal, ProcedureKind::Emergency, ProcedureKind::Checklist}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<LineKind> parse_line_kind(std::string_view s) {
  for (auto k : {LineKind::Action, LineKind::Check, LineKind::Note, LineKind::Restriction, LineKind::Link}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<PeerRole> parse_role(std::string_view s) {
  if (s == "ui") return PeerRole::Ui;
  if (s == "simulator") return PeerRole::Simulator;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Commands

Json command_json(const PilotCommand& c) {
  return std::visit(
      overloaded{
          [](const cmd::MarkDone& c) { return Json{{"type", "MarkDone"}, {"action", c.action.str()}}; },
          [](const cmd::Wait& c) { return Json{{"type", "Wait"}, {"action", c.action.str()}}; },
          [](const cmd::CheckAll& c) { return Json{{"type", "CheckAll"}, {"iblock", c.iblock.str()}}; },
          [](const cmd::DeferProcedure& c) { return Json{{"type", "DeferProcedure"}, {"procedure", c.procedure}}; },
          [](const cmd::OpenProcedure& c) { return Json{{"type", "OpenProcedure"}, {"procedure", c.procedure}}; },
          [](const cmd::AcknowledgePopup& c) {
            return Json{{"type", "AcknowledgePopup"}, {"procedure", c.procedure}, {"response", c.accept ? "accept" : "later"}};
          },
          [](const cmd::NavigatePhase& c) { return Json{{"type", "NavigatePhase"}, {"phase", str(to_string(c.phase))}}; },
          [](const cmd::ResumeFromReminder& c) {
            return Json{{"type", "ResumeFromReminder"}, {"procedure", c.procedure}};
          },
      },
      c);
}

PilotCommand command_from(const Json& j) {
  if (!j.is_object()) malformed("`command` must be an object");
  auto type = text_field(j, "type");
  if (type == "MarkDone") return cmd::MarkDone{action_field(j, "action")};
  if (type == "Wait") return cmd::Wait{action_field(j, "action")};
  if (type == "CheckAll") return cmd::CheckAll{iblock_field(j, "iblock")};
  if (type == "DeferProcedure") return cmd::DeferProcedure{text_field(j, "procedure")};
  if (type == "OpenProcedure") return cmd::OpenProcedure{text_field(j, "procedure")};
  if (type == "ResumeFromReminder") return cmd::ResumeFromReminder{text_field(j, "procedure")};
  if (type == "NavigatePhase") return cmd::NavigatePhase{enum_field<FlightPhase>(j, "phase", parse_phase)};
  if (type == "AcknowledgePopup") {
    auto r = text_field(j, "response");
    if (r != "accept" && r != "later") malformed("`response` must be accept or later");
    return cmd::AcknowledgePopup{text_field(j, "procedure"), r == "accept"};
  }
  malformed("unknown command type " + type);
}

// ---------------------------------------------------------------------------
// Events

Json event_json(const EngineEvent& e) {
  Json j{{"kind", "event"}, {"seq", e.seq}, {"tick", e.tick}, {"type", str(event_kind(e.payload))}};
  std::visit(overloaded{
                 [&](const ev::PopupRaised& p) {
                   j["procedure"] = p.procedure;
                   j["ecam"] = p.ecam;
                 },
                 [&](const ev::ReminderShown& p) { j["procedure"] = p.procedure; },
                 [&](const ev::ActionAutoCompleted& p) { j["action"] = p.action.str(); },
                 [&](const ev::ActionStatusChanged& p) {
                   j["action"] = p.action.str();
                   j["from"] = str(to_string(p.from));
                   j["to"] = str(to_string(p.to));
                 },
                 [&](const ev::ProcedureActivated& p) { j["procedure"] = p.procedure; },
                 [&](const ev::ProcedurePushed& p) {
                   j["procedure"] = p.procedure;
                   j["parent"] = p.parent;
                 },
                 [&](const ev::ProcedureReturned& p) {
                   j["parent"] = p.parent;
                   j["cursor"] = {{"iblock", p.cursor.iblock}, {"action", p.cursor.action}};
                 },
                 [&](const ev::ProcedureCompleted& p) { j["procedure"] = p.procedure; },
                 [&](const ev::GoalReached& p) { j["iblock"] = p.iblock.str(); },
                 [&](const ev::AbnormalBranch& p) {
                   j["iblock"] = p.iblock.str();
                   j["target"] = p.target;
                 },
                 [&](const ev::StateContradiction& p) { j["action"] = p.action.str(); },
             },
             e.payload);
  return j;
}

EngineEvent event_from(const Json& j) {
  EngineEvent e;
  e.seq = int_field<std::uint64_t>(j, "seq");
  e.tick = int_field<std::int64_t>(j, "tick");
  auto type = text_field(j, "type");
  if (type == "PopupRaised") {
    e.payload = ev::PopupRaised{text_field(j, "procedure"), bool_field(j, "ecam")};
  } else if (type == "ReminderShown") {
    e.payload = ev::ReminderShown{text_field(j, "procedure")};
  } else if (type == "ActionAutoCompleted") {
    e.payload = ev::ActionAutoCompleted{action_field(j, "action")};
  } else if (type == "ActionStatusChanged") {
    e.payload = ev::ActionStatusChanged{action_field(j, "action"), enum_field<ActionStatus>(j, "from", parse_status),
                                        enum_field<ActionStatus>(j, "to", parse_status)};
  } else if (type == "ProcedureActivated") {
    e.payload = ev::ProcedureActivated{text_field(j, "procedure")};
  } else if (type == "ProcedurePushed") {
    e.payload = ev::ProcedurePushed{text_field(j, "procedure"), text_field(j, "parent")};
  } else if (type == "ProcedureReturned") {
    const auto& c = field(j, "cursor");
    if (!c.is_object()) malformed("`cursor` must be an object");
    e.payload = ev::ProcedureReturned{text_field(j, "parent"),
                                      Cursor{int_field<std::size_t>(c, "iblock"), int_field<std::size_t>(c, "action")}};
  } else if (type == "ProcedureCompleted") {
    e.payload = ev::ProcedureCompleted{text_field(j, "procedure")};
  } else if (type == "GoalReached") {
    e.payload = ev::GoalReached{iblock_field(j, "iblock")};
  } else if (type == "AbnormalBranch") {
    e.payload = ev::AbnormalBranch{iblock_field(j, "iblock"), text_field(j, "target")};
  } else if (type == "StateContradiction") {
    e.payload = ev::StateContradiction{action_field(j, "action")};
  } else {
    malformed("unknown event type " + type);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Display

Json opt(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

Json line_json(const DisplayLine& l) {
  return Json{{"kind", str(to_string(l.kind))},
              {"ref", l.ref},
              {"text", l.text},
              {"color", str(to_string(l.color))},
              {"status", l.status ? Json(str(to_string(*l.status))) : Json(nullptr)},
              {"level2", opt(l.level2)},
              {"level3", opt(l.level3)},
              {"focused", l.focused}};
}

DisplayLine line_from(const Json& j) {
  DisplayLine l;
  l.kind = enum_field<LineKind>(j, "kind", parse_line_kind);
  l.ref = text_field(j, "ref");
  l.text = text_field(j, "text");
  l.color = enum_field<ColorCode>(j, "color", parse_color);
  if (!field(j, "status").is_null()) l.status = enum_field<ActionStatus>(j, "status", parse_status);
  l.level2 = opt_text(j, "level2");
  l.level3 = opt_text(j, "level3");
  l.focused = bool_field(j, "focused");
  return l;
}

Json view_json(const ProcedureView& v) {
  Json blocks = Json::array();
  for (const auto& b : v.iblocks) {
    Json lines = Json::array();
    for (const auto& l : b.lines) lines.push_back(line_json(l));
    blocks.push_back({{"id", b.id}, {"current", b.current}, {"completed", b.completed}, {"lines", lines}});
  }
  Json links = Json::array();
  for (const auto& l : v.links) links.push_back(line_json(l));
  return Json{{"id", v.id},
              {"title", v.title},
              {"kind", str(to_string(v.kind))},
              {"title_color", str(to_string(v.title_color))},
              {"active", v.active},
              {"iblocks", blocks},
              {"links", links}};
}

ProcedureView view_from(const Json& j) {
  if (!j.is_object()) malformed("procedure view must be an object");
  ProcedureView v;
  v.id = text_field(j, "id");
  v.title = text_field(j, "title");
  v.kind = enum_field<ProcedureKind>(j, "kind", parse_kind);
  v.title_color = enum_field<ColorCode>(j, "title_color", parse_color);
  v.active = bool_field(j, "active");
  for (const auto& b : array_field(j, "iblocks")) {
    IBlockView bv;
    bv.id = text_field(b, "id");
    bv.current = bool_field(b, "current");
    bv.completed = bool_field(b, "completed");
    for (const auto& l : array_field(b, "lines")) bv.lines.push_back(line_from(l));
    v.iblocks.push_back(std::move(bv));
  }
  for (const auto& l : array_field(j, "links")) v.links.push_back(line_from(l));
  return v;
}

Json display_json(const DisplayModel& m) {
  Json menu = Json::array();
  for (const auto& t : m.menu) {
    menu.push_back({{"phase", str(to_string(t.phase))}, {"selected", t.selected}, {"current", t.current_flight_phase}});
  }
  Json pages = Json::array();
  for (const auto& v : m.page_procedures) pages.push_back(view_json(v));
  Json popup = nullptr;
  if (m.popup) {
    popup = {{"procedure", m.popup->procedure},
             {"title", m.popup->title},
             {"color", str(to_string(m.popup->color))},
             {"ecam", m.popup->ecam},
             {"queued", m.popup->queued}};
  }
  Json reminders = Json::array();
  for (const auto& r : m.reminder_bar) {
    reminders.push_back({{"procedure", r.procedure}, {"title", r.title}, {"color", str(to_string(r.color))}});
  }
  return Json{{"kind", "display"},
              {"tick", m.tick},
              {"page", str(to_string(m.page))},
              {"flight_phase", str(to_string(m.flight_phase))},
              {"page_title_color", str(to_string(m.page_title_color))},
              {"menu", menu},
              {"active", m.active ? view_json(*m.active) : Json(nullptr)},
              {"page_procedures", pages},
              {"popup", popup},
              {"reminder_bar", reminders},
              {"stack", m.stack}};
}

DisplayModel display_from(const Json& j) {
  DisplayModel m;
  m.tick = int_field<std::int64_t>(j, "tick");
  m.page = enum_field<FlightPhase>(j, "page", parse_phase);
  m.flight_phase = enum_field<FlightPhase>(j, "flight_phase", parse_phase);
  m.page_title_color = enum_field<ColorCode>(j, "page_title_color", parse_color);
  for (const auto& t : array_field(j, "menu")) {
    m.menu.push_back(PhaseTab{enum_field<FlightPhase>(t, "phase", parse_phase), bool_field(t, "selected"),
                              bool_field(t, "current")});
  }
  if (!field(j, "active").is_null()) m.active = view_from(j["active"]);
  for (const auto& v : array_field(j, "page_procedures")) m.page_procedures.push_back(view_from(v));
  if (const auto& p = field(j, "popup"); !p.is_null()) {
    m.popup = PopupView{text_field(p, "procedure"), text_field(p, "title"), enum_field<ColorCode>(p, "color", parse_color),
                        bool_field(p, "ecam"), int_field<std::size_t>(p, "queued")};
  }
  for (const auto& r : array_field(j, "reminder_bar")) {
    m.reminder_bar.push_back(
        ReminderView{text_field(r, "procedure"), text_field(r, "title"), enum_field<ColorCode>(r, "color", parse_color)});
  }
  for (const auto& s : array_field(j, "stack")) {
    if (!s.is_string()) malformed("`stack` entries must be strings");
    m.stack.push_back(s.get<std::string>());
  }
  return m;
}

}  // namespace

std::string_view to_string(PeerRole role) { return role == PeerRole::Ui ? "ui" : "simulator"; }

std::string_view message_kind(const WireMessage& m) {
  static constexpr std::string_view names[] = {
      "hello", "state_update", "command", "event", "display", "snapshot_request", "snapshot_reply", "error", "step",
  };
  return names[m.index()];
}

std::string encode(const WireMessage& m) {
  Json j = std::visit(
      overloaded{
          [](const msg::Hello& h) {
            Json j{{"kind", "hello"}, {"protocol_version", h.protocol_version}, {"procedure_set_hash", h.procedure_set_hash}};
            if (h.role) j["role"] = str(to_string(*h.role));
            return j;
          },
          [](const msg::StateUpdate& s) {
            Json assignments = Json::object();
            for (const auto& [k, v] : s.assignments) assignments[k] = v ? detail::value_to_json(*v) : Json(nullptr);
            Json j{{"kind", "state_update"}, {"tick", s.tick}, {"assignments", assignments}};
            if (s.phase) j["phase"] = str(to_string(*s.phase));
            return j;
          },
          [](const msg::Command& c) { return Json{{"kind", "command"}, {"command", command_json(c.command)}}; },
          [](const msg::Event& e) { return event_json(e.event); },
          [](const msg::Display& d) { return display_json(d.model); },
          [](const msg::SnapshotRequest&) { return Json{{"kind", "snapshot_request"}}; },
          [](const msg::SnapshotReply& r) { return Json{{"kind", "snapshot_reply"}, {"blob", r.blob}}; },
          [](const msg::ErrorReply& e) { return Json{{"kind", "error"}, {"code", e.code}, {"message", e.message}}; },
          [](const msg::Step& s) { return Json{{"kind", "step"}, {"steps", s.steps}}; },
      },
      m);
  return j.dump();
}

WireMessage decode(std::string_view frame) {
  Json j;
  try {
    j = Json::parse(frame);
  } catch (const Json::exception& e) {
    malformed(std::string("frame is not JSON: ") + e.what());
  }
  if (!j.is_object()) malformed("frame must be a JSON object");
  auto it = j.find("kind");
  if (it == j.end() || !it->is_string()) malformed("frame has no string `kind`");
  auto kind = it->get<std::string>();
  try {
    if (kind == "hello") {
      msg::Hello h;
      h.protocol_version = int_field<int>(j, "protocol_version");
      if (h.protocol_version != kProtocolVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "protocol version " + std::to_string(h.protocol_version) +
                                                       " is not supported (expected " +
                                                       std::to_string(kProtocolVersion) + ")");
      }
      h.procedure_set_hash = text_field(j, "procedure_set_hash");
      if (j.contains("role")) h.role = enum_field<PeerRole>(j, "role", parse_role);
      return h;
    }
    if (kind == "state_update") {
      msg::StateUpdate s;
      s.tick = int_field<std::int64_t>(j, "tick");
      if (j.contains("phase")) s.phase = enum_field<FlightPhase>(j, "phase", parse_phase);
      const auto& a = field(j, "assignments");
      if (!a.is_object()) malformed("`assignments` must be an object");
      for (const auto& [k, v] : a.items()) {
        s.assignments[k] = v.is_null() ? std::nullopt
                                       : std::optional<ParamValue>(detail::value_from_json(v, ErrorCode::MalformedFrame));
      }
      return s;
    }
    if (kind == "command") return msg::Command{command_from(field(j, "command"))};
    if (kind == "event") return msg::Event{event_from(j)};
    if (kind == "display") return msg::Display{display_from(j)};
    if (kind == "snapshot_request") return msg::SnapshotRequest{};
    if (kind == "snapshot_reply") return msg::SnapshotReply{text_field(j, "blob")};
    if (kind == "error") return msg::ErrorReply{text_field(j, "code"), text_field(j, "message")};
    if (kind == "step") {
      msg::Step s;
      if (j.contains("steps")) s.steps = int_field<int>(j, "steps");
      if (s.steps < 1) malformed("`steps` must be at least 1");
      return s;
    }
  } catch (const Json::exception& e) {
    malformed(std::string("bad field: ") + e.what());
  }
  throw Error(ErrorCode::UnknownMessageKind, "unknown message kind " + kind);
}

void FrameReader::feed(std::string_view bytes) {
  while (!bytes.empty()) {
    auto nl = bytes.find('\n');
    auto chunk = bytes.substr(0, nl);
    if (discarding_) {
      if (nl != std::string_view::npos) discarding_ = false;
    } else {
      buffer_.append(chunk);
      auto tail = buffer_.rfind('\n');
      auto pending = tail == std::string::npos ? buffer_.size() : buffer_.size() - tail - 1;
      if (pending > kMaxFrameBytes) {
        buffer_.resize(buffer_.size() - pending);
        discarding_ = nl == std::string_view::npos;
        ++overflows_;
      } else if (nl != std::string_view::npos) {
        buffer_.push_back('\n');
      }
    }
    if (nl == std::string_view::npos) break;
    bytes.remove_prefix(nl + 1);
  }
}

std::optional<std::string> FrameReader::next() {
  auto nl = buffer_.find('\n');
  if (nl == std::string::npos) return std::nullopt;
  auto line = buffer_.substr(0, nl);
  buffer_.erase(0, nl + 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool FrameReader::take_overflow() {
  if (overflows_ == 0) return false;
  overflows_ = 0;
  return true;
}

}  // namespace ocsis
