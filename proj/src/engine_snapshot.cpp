#include "json_values.hpp"
#include "ocsis/dsl.hpp"
#include "ocsis/engine.hpp"

namespace ocsis {

using detail::Json;

struct SnapshotCodec {
  static std::string_view state_name(Session::ProcState s) {
    switch (s) {
      case Session::ProcState::Idle: return "idle";
      case Session::ProcState::Pending: return "pending";
      case Session::ProcState::Active: return "active";
      case Session::ProcState::Deferred: return "deferred";
    }
    return "idle";
  }

  static Session::ProcState parse_state(const std::string& s) {
    if (s == "idle") return Session::ProcState::Idle;
    if (s == "pending") return Session::ProcState::Pending;
    if (s == "active") return Session::ProcState::Active;
    if (s == "deferred") return Session::ProcState::Deferred;
    throw Error(ErrorCode::InvalidInput, "unknown procedure state " + s);
  }

  static Json cursor(const Cursor& c) { return Json::array({c.iblock, c.action}); }
  static Cursor cursor(const Json& j) { return Cursor{j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

  static std::string encode(const Session& s) {
    Json j;
    j["format"] = "ocsis-snapshot";
    j["version"] = kSnapshotVersion;
    j["set_hash"] = s.set_hash_;
    j["tick"] = s.now_;
    j["last_state_tick"] = s.last_state_tick_ ? Json(*s.last_state_tick_) : Json(nullptr);
    j["history"] = Json::array();
    for (const auto& st : s.history_) j["history"].push_back(detail::state_to_json(st));
    j["statuses"] = Json::object();
    for (const auto& [ref, st] : s.statuses_) j["statuses"][ref.str()] = std::string(to_string(st));
    j["procedures"] = Json::object();
    for (const auto& [id, rt] : s.runtime_) {
      j["procedures"][id] = {{"state", state_name(rt.state)},
                             {"armed", rt.armed},
                             {"completed", rt.completed},
                             {"activated", rt.activated}};
    }
    j["stack"] = Json::array();
    for (const auto& f : s.stack_) j["stack"].push_back({{"procedure", f.procedure}, {"cursor", cursor(f.cursor)}});
    j["deferred"] = Json::array();
    for (const auto& d : s.deferred_) {
      j["deferred"].push_back({{"procedure", d.procedure},
                               {"cursor", d.saved ? cursor(*d.saved) : Json(nullptr)},
                               {"reminder", d.reminder}});
    }
    j["pending"] = s.pending_;
    j["branch_latch"] = s.branch_latch_;
    j["contradiction_latch"] = Json::array();
    for (const auto& r : s.contradiction_latch_) j["contradiction_latch"].push_back(r.str());
    j["page"] = std::string(to_string(s.page_));
    j["page_focus"] = Json::object();
    for (const auto& [phase, id] : s.page_focus_) j["page_focus"][std::string(to_string(phase))] = id;
    j["next_seq"] = s.next_seq_;
    j["log"] = Json::array();
    for (const auto& e : s.log_) j["log"].push_back(format_event(e));
    return j.dump();
  }

  static ActionRef action_ref(const std::string& text) {
    auto r = ActionRef::parse(text);
    if (!r) throw Error(ErrorCode::InvalidInput, "bad action ref " + text);
    return *r;
  }

  static void decode(Session& s, const Json& j) {
    constexpr auto bad = ErrorCode::InvalidInput;
    s.now_ = j.at("tick").get<std::int64_t>();
    if (!j.at("last_state_tick").is_null()) s.last_state_tick_ = j.at("last_state_tick").get<std::int64_t>();
    for (const auto& st : j.at("history")) s.history_.push_back(detail::state_from_json(st, bad));
    for (const auto& [ref, st] : j.at("statuses").items()) {
      auto status = parse_status(st.get<std::string>());
      auto r = action_ref(ref);
      if (!status || s.statuses_.count(r) == 0) throw Error(bad, "bad status entry " + ref);
      s.statuses_[r] = *status;
    }
    for (const auto& [id, rt] : j.at("procedures").items()) {
      if (s.runtime_.count(id) == 0) throw Error(bad, "unknown procedure " + id);
      auto& out = s.runtime_[id];
      out.state = parse_state(rt.at("state").get<std::string>());
      out.armed = rt.at("armed").get<bool>();
      out.completed = rt.at("completed").get<bool>();
      out.activated = rt.at("activated").get<bool>();
    }
    for (const auto& f : j.at("stack")) {
      s.stack_.push_back(Frame{f.at("procedure").get<std::string>(), cursor(f.at("cursor"))});
    }
    for (const auto& d : j.at("deferred")) {
      DeferredEntry e{d.at("procedure").get<std::string>(), std::nullopt, d.at("reminder").get<bool>()};
      if (!d.at("cursor").is_null()) e.saved = cursor(d.at("cursor"));
      s.deferred_.push_back(std::move(e));
    }
    s.pending_ = j.at("pending").get<std::vector<std::string>>();
    for (const auto& k : j.at("branch_latch")) s.branch_latch_.insert(k.get<std::string>());
    for (const auto& r : j.at("contradiction_latch")) s.contradiction_latch_.insert(action_ref(r.get<std::string>()));
    s.page_ = detail::phase_from_json(j.at("page"), bad);
    for (const auto& [phase, id] : j.at("page_focus").items()) {
      s.page_focus_[detail::phase_from_json(phase, bad)] = id.get<std::string>();
    }
    s.next_seq_ = j.at("next_seq").get<std::uint64_t>();
    for (const auto& line : j.at("log")) {
      auto e = parse_event(line.get<std::string>());
      if (!e) throw Error(bad, "bad event line " + line.get<std::string>());
      s.log_.push_back(std::move(*e));
    }
  }
};

Snapshot Session::snapshot() const { return Snapshot{SnapshotCodec::encode(*this)}; }

Session Session::restore(std::shared_ptr<const ProcedureSet> set, const Snapshot& snap, SessionConfig config) {
  Json j;
  try {
    j = Json::parse(snap.blob);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "ocsis-snapshot") {
    throw Error(ErrorCode::InvalidInput, "not an ocsis snapshot");
  }
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kSnapshotVersion) {
    throw Error(ErrorCode::VersionUnsupported,
                "snapshot version " + (j.contains("version") ? j["version"].dump() : std::string("missing")) +
                    " is not supported (expected " + std::to_string(kSnapshotVersion) + ")");
  }
  if (!set) throw Error(ErrorCode::InvalidSet, "no procedure set");
  auto hash = content_hash(*set);
  if (j.value("set_hash", "") != hash) {
    throw Error(ErrorCode::HashMismatch, "snapshot was taken against procedure set " + j.value("set_hash", "") +
                                             ", not " + hash);
  }
  Session s(std::move(set), std::move(config), hash);
  try {
    SnapshotCodec::decode(s, j);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed snapshot: ") + e.what());
  }
  return s;
}

}  // namespace ocsis
