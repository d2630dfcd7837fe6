#include <doctest.h>

#include "ocsis/error.hpp"
#include "ocsis/protocol.hpp"
#include "inputs.hpp"
#include "support.hpp"

using namespace ocsis;

namespace {

ErrorCode decode_error(std::string_view frame) {
  try {
    decode(frame);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decoded without error: " << frame);
  return ErrorCode::Io;
}

// A display with every optional field set somewhere.
DisplayModel busy_display() {
  Session s(testing::a320());
  auto inputs = testing::inputs_of(testing::scenario("flaps_locked"));
  for (const auto& in : inputs) {
    testing::apply(s, in);
    if (!s.stack().empty() && s.stack().back().procedure == "FLAPS_LOCKED") break;
  }
  return s.display_model();
}

std::vector<WireMessage> representatives() {
  std::vector<WireMessage> out = {
      msg::Hello{kProtocolVersion, "abc123", std::nullopt},
      msg::Hello{kProtocolVersion, "abc123", PeerRole::Simulator},
      msg::Hello{kProtocolVersion, "", PeerRole::Ui},
      msg::StateUpdate{7, FlightPhase::FinalApproach,
                       {{"IAS", ParamValue{142.5}}, {"GEAR_DOWN", ParamValue{true}},
                        {"FLAPS_POS", ParamValue{EnumLabel{"CONF3"}}}, {"N1_ENG1", std::nullopt}}},
      msg::StateUpdate{8, std::nullopt, {}},
      msg::SnapshotRequest{},
      msg::SnapshotReply{"{\"format\":\"ocsis-snapshot\"}\n"},
      msg::ErrorReply{"MalformedFrame", "line \"1\""},
      msg::Step{},
      msg::Step{5},
      msg::Display{DisplayModel{}},
      msg::Display{busy_display()},
  };
  std::vector<PilotCommand> commands = {
      cmd::MarkDone{{"P", "A"}}, cmd::Wait{{"P", "A"}}, cmd::CheckAll{{"P", "B"}}, cmd::DeferProcedure{"P"},
      cmd::OpenProcedure{"P"}, cmd::AcknowledgePopup{"P", true}, cmd::AcknowledgePopup{"P", false},
      cmd::NavigatePhase{FlightPhase::Landing}, cmd::ResumeFromReminder{"P"}};
  for (const auto& c : commands) out.push_back(msg::Command{c});
  std::vector<EventPayload> events = {
      ev::PopupRaised{"P", true}, ev::ReminderShown{"P"}, ev::ActionAutoCompleted{{"P", "A"}},
      ev::ActionStatusChanged{{"P", "A"}, ActionStatus::ToDo, ActionStatus::NotApplicable},
      ev::ProcedureActivated{"P"}, ev::ProcedurePushed{"Q", "P"}, ev::ProcedureReturned{"P", {1, 2}},
      ev::ProcedureCompleted{"P"}, ev::GoalReached{{"P", "B"}}, ev::AbnormalBranch{{"P", "B"}, "Q"},
      ev::StateContradiction{{"P", "A"}}};
  std::uint64_t seq = 1;
  for (const auto& e : events) out.push_back(msg::Event{EngineEvent{seq++, 40, e}});
  return out;
}

}  // namespace

TEST_CASE("protocol: every message kind round-trips") {
  std::set<std::string> kinds;
  for (const auto& m : representatives()) {
    auto frame = encode(m);
    INFO(frame);
    CHECK(frame.find('\n') == std::string::npos);
    CHECK(decode(frame) == m);
    kinds.insert(std::string(message_kind(m)));
  }
  CHECK(kinds.size() == std::variant_size_v<WireMessage>);
}

TEST_CASE("protocol: golden frames") {
  auto text = testing::slurp(testing::fixture("protocol/frames.ndjson"));
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    INFO(line);
    CHECK(encode(decode(line)) == line);
    ++n;
  }
  CHECK(n >= 9);
}

TEST_CASE("protocol: malformed input") {
  CHECK(decode_error("{\"kind\":\"hello\"") == ErrorCode::MalformedFrame);
  CHECK(decode_error("[1,2]") == ErrorCode::MalformedFrame);
  CHECK(decode_error("{}") == ErrorCode::MalformedFrame);
  CHECK(decode_error("{\"kind\":\"teleport\"}") == ErrorCode::UnknownMessageKind);
  CHECK(decode_error("{\"kind\":\"hello\",\"protocol_version\":2,\"procedure_set_hash\":\"x\"}") ==
        ErrorCode::UnsupportedVersion);
  CHECK(decode_error("{\"kind\":\"command\",\"command\":{\"type\":\"MarkDone\",\"action\":\"NODOT\"}}") ==
        ErrorCode::MalformedFrame);
  CHECK(decode_error("{\"kind\":\"command\",\"command\":{\"type\":\"AcknowledgePopup\",\"procedure\":\"P\",\"response\":\"maybe\"}}") ==
        ErrorCode::MalformedFrame);
  CHECK(decode_error("{\"kind\":\"state_update\",\"tick\":\"soon\",\"assignments\":{}}") == ErrorCode::MalformedFrame);
  CHECK(decode_error("{\"kind\":\"state_update\",\"tick\":1,\"assignments\":{\"X\":[1]}}") == ErrorCode::MalformedFrame);
  CHECK(decode_error("{\"kind\":\"step\",\"steps\":0}") == ErrorCode::MalformedFrame);
  CHECK(decode_error("{\"kind\":\"event\",\"seq\":1,\"tick\":1,\"type\":\"Nope\"}") == ErrorCode::MalformedFrame);
}

TEST_CASE("protocol: a truncated frame does not disturb the next one") {
  FrameReader r;
  auto good = encode(msg::Step{2});
  auto cut = good.substr(0, good.size() / 2);
  r.feed(cut + "\n" + good.substr(0, 3));
  r.feed(good.substr(3) + "\r\n");
  auto first = r.next();
  REQUIRE(first);
  CHECK(decode_error(*first) == ErrorCode::MalformedFrame);
  auto second = r.next();
  REQUIRE(second);
  CHECK(decode(*second) == WireMessage{msg::Step{2}});
  CHECK_FALSE(r.next());
}

TEST_CASE("protocol: oversized frames are dropped and flagged") {
  FrameReader r;
  std::string big(kMaxFrameBytes + 10, 'x');
  r.feed(big.substr(0, 600000));
  r.feed(big.substr(600000));
  r.feed("\n" + encode(msg::SnapshotRequest{}) + "\n");
  CHECK(r.take_overflow());
  CHECK_FALSE(r.take_overflow());
  auto f = r.next();
  REQUIRE(f);
  CHECK(decode(*f) == WireMessage{msg::SnapshotRequest{}});
  r.feed(std::string(kMaxFrameBytes + 1, 'y') + "\n{\"kind\":\"step\"}\n");
  CHECK(r.take_overflow());
  CHECK(r.next() == std::optional<std::string>("{\"kind\":\"step\"}"));
}
