#include <doctest.h>

#include <thread>

#include "client.hpp"
#include "ocsis/server.hpp"
#include "support.hpp"

using namespace ocsis;

namespace {

struct Running {
  Session session;
  FeedServer server;
  std::thread thread;
  std::vector<TraceRecord> recorded;
  std::mutex mutex;

  explicit Running(ServerOptions options = {}) : session(testing::a320()), server(session, with_record(std::move(options))) {
    server.bind();
    thread = std::thread([this] { server.run(); });
  }
  ~Running() {
    server.stop();
    thread.join();
  }
  ServerOptions with_record(ServerOptions o) {
    o.record = [this](const TraceRecord& r) {
      std::lock_guard lock(mutex);
      recorded.push_back(r);
    };
    o.log = [](const std::string&) {};
    return o;
  }
  std::uint16_t port() const { return server.port(); }
  const std::string& hash() const { return session.set_hash(); }
};

msg::StateUpdate cruise_leak(std::int64_t tick, bool leak) {
  return msg::StateUpdate{tick, FlightPhase::Cruise, {{"FUEL_LEAK_DETECTED", ParamValue{leak}}, {"N1_ENG1", ParamValue{85.0}}}};
}

std::vector<std::string> events_in(const std::vector<std::string>& frames) {
  std::vector<std::string> out;
  for (const auto& f : frames) {
    auto m = decode(f);
    if (const auto* e = std::get_if<msg::Event>(&m)) out.push_back(format_payload(e->event.payload));
  }
  return out;
}

DisplayModel display_after(testing::Client& ui) {
  return std::get<msg::Display>(decode(ui.until_display().back())).model;
}

DisplayLine* line_of(DisplayModel& m, const std::string& ref) {
  if (!m.active) return nullptr;
  for (auto& b : m.active->iblocks)
    for (auto& l : b.lines)
      if (l.ref == ref) return &l;
  return nullptr;
}

}  // namespace

TEST_CASE("server: a UI gets hello then the display") {
  Running r;
  testing::Client ui(r.port());
  auto hello = ui.greet(r.hash(), PeerRole::Ui);
  CHECK(hello.protocol_version == kProtocolVersion);
  CHECK(hello.procedure_set_hash == r.hash());
  CHECK_FALSE(hello.role);
  auto display = std::get<msg::Display>(ui.message());
  CHECK(display.model.menu.size() == 9);
  CHECK_FALSE(display.model.popup);
}

TEST_CASE("server: commands are broadcast to every UI in the same order") {
  Running r;
  testing::Client a(r.port()), b(r.port()), sim(r.port());
  a.greet(r.hash(), PeerRole::Ui);
  a.message();
  b.greet(r.hash(), PeerRole::Ui);
  b.message();
  sim.greet(r.hash(), PeerRole::Simulator);

  sim.send(cruise_leak(1, false));
  auto a1 = a.until_display();
  auto b1 = b.until_display();
  CHECK(a1 == b1);
  sim.send(cruise_leak(2, true));
  auto a2 = a.until_display();
  CHECK(events_in(a2) == std::vector<std::string>{"PopupRaised FUEL_LEAK"});
  CHECK(b.until_display() == a2);

  a.send(msg::Command{cmd::AcknowledgePopup{"FUEL_LEAK", true}});
  auto a3 = a.until_display();
  CHECK(b.until_display() == a3);
  b.send(msg::Command{cmd::MarkDone{{"FUEL_LEAK", "FLK_XFEED"}}});
  auto a4 = a.until_display();
  auto b4 = b.until_display();
  CHECK(a4 == b4);
  REQUIRE(a4.size() == 2);
  CHECK(events_in(a4) == std::vector<std::string>{"ActionStatusChanged FUEL_LEAK.FLK_XFEED ToDo DoneManual"});
  auto shown = std::get<msg::Display>(decode(a4.back())).model;
  REQUIRE(shown.active);
  CHECK(shown.active->iblocks[0].lines[0].color == ColorCode::Green);

  // An illegal command is answered to its sender only.
  b.send(msg::Command{cmd::MarkDone{{"FUEL_LEAK", "FLK_XFEED"}}});
  auto err = std::get<msg::ErrorReply>(b.message());
  CHECK(err.code == "IllegalTransition");

  // The recorded session replays offline.
  std::vector<TraceRecord> recorded;
  {
    std::lock_guard lock(r.mutex);
    recorded = r.recorded;
  }
  auto report = replay(recorded, testing::a320());
  CHECK(report.ok);
  CHECK(report.events == 3);
}

TEST_CASE("server: handshake rejections close the connection") {
  Running r;
  SUBCASE("hash mismatch") {
    testing::Client c(r.port());
    c.greet("0000", PeerRole::Ui);
    auto err = std::get<msg::ErrorReply>(c.message());
    CHECK(err.code == "HashMismatch");
    CHECK_FALSE(c.frame());
  }
  SUBCASE("anything before hello") {
    testing::Client c(r.port());
    c.message();
    c.send(msg::SnapshotRequest{});
    CHECK(std::holds_alternative<msg::ErrorReply>(c.message()));
    CHECK_FALSE(c.frame());
  }
  SUBCASE("unsupported version") {
    testing::Client c(r.port());
    c.message();
    c.send_raw("{\"kind\":\"hello\",\"protocol_version\":9,\"procedure_set_hash\":\"x\"}\n");
    CHECK(std::get<msg::ErrorReply>(c.message()).code == "UnsupportedVersion");
    CHECK_FALSE(c.frame());
  }
  SUBCASE("second simulator") {
    testing::Client s1(r.port()), s2(r.port());
    s1.greet(r.hash(), PeerRole::Simulator);
    s1.send(msg::SnapshotRequest{});
    s1.message();
    s2.greet(r.hash(), PeerRole::Simulator);
    CHECK(std::holds_alternative<msg::ErrorReply>(s2.message()));
    CHECK_FALSE(s2.frame());
  }
}

TEST_CASE("server: decode errors after the handshake are not fatal") {
  Running r;
  testing::Client ui(r.port());
  ui.greet(r.hash(), PeerRole::Ui);
  ui.message();
  ui.send_raw("{\"kind\":\"command\",\n");
  CHECK(std::get<msg::ErrorReply>(ui.message()).code == "MalformedFrame");
  ui.send_raw("{\"kind\":\"warp\"}\n");
  CHECK(std::get<msg::ErrorReply>(ui.message()).code == "UnknownMessageKind");
  ui.send(msg::StateUpdate{1, std::nullopt, {}});
  CHECK(std::get<msg::ErrorReply>(ui.message()).code == "IllegalTransition");
  ui.send(msg::SnapshotRequest{});
  CHECK(std::holds_alternative<msg::SnapshotReply>(ui.message()));
}

TEST_CASE("server: UIs survive a simulator disconnect; reconnecting UIs see the same view") {
  Running r;
  testing::Client ui(r.port());
  ui.greet(r.hash(), PeerRole::Ui);
  ui.message();
  {
    testing::Client sim(r.port());
    sim.greet(r.hash(), PeerRole::Simulator);
    sim.send(cruise_leak(1, true));
    ui.until_display();
    ui.send(msg::Command{cmd::AcknowledgePopup{"FUEL_LEAK", true}});
    ui.until_display();
    ui.send(msg::Command{cmd::Wait{{"FUEL_LEAK", "FLK_XFEED"}}});
  }
  auto last = ui.until_display();
  auto view = std::get<msg::Display>(decode(last.back())).model;
  CHECK(view.active->iblocks[0].lines[0].color == ColorCode::Amber);

  testing::Client again(r.port());
  again.greet(r.hash(), PeerRole::Ui);
  CHECK(std::get<msg::Display>(again.message()).model == view);

  // A new simulator may take over and the UI still receives updates.
  testing::Client sim2(r.port());
  sim2.greet(r.hash(), PeerRole::Simulator);
  sim2.send(cruise_leak(2, true));
  CHECK(ui.until_display().size() == 1);
}

TEST_CASE("server: wait, done, check-all and later change exactly the expected display parts") {
  Running r;
  testing::Client ui(r.port());
  ui.greet(r.hash(), PeerRole::Ui);
  ui.message();
  testing::Client sim(r.port());
  sim.greet(r.hash(), PeerRole::Simulator);
  sim.send(cruise_leak(1, true));
  ui.until_display();
  ui.send(msg::Command{cmd::AcknowledgePopup{"FUEL_LEAK", true}});
  auto before = display_after(ui);
  REQUIRE(before.active);
  REQUIRE(line_of(before, "FUEL_LEAK.FLK_XFEED"));
  CHECK(line_of(before, "FUEL_LEAK.FLK_XFEED")->color == ColorCode::Cyan);

  ui.send(msg::Command{cmd::Wait{{"FUEL_LEAK", "FLK_XFEED"}}});
  auto waited = display_after(ui);
  auto expected = before;
  line_of(expected, "FUEL_LEAK.FLK_XFEED")->color = ColorCode::Amber;
  line_of(expected, "FUEL_LEAK.FLK_XFEED")->status = ActionStatus::Postponed;
  CHECK(waited == expected);

  ui.send(msg::Command{cmd::MarkDone{{"FUEL_LEAK", "FLK_XFEED"}}});
  auto done = display_after(ui);
  expected = waited;
  line_of(expected, "FUEL_LEAK.FLK_XFEED")->color = ColorCode::Green;
  line_of(expected, "FUEL_LEAK.FLK_XFEED")->status = ActionStatus::DoneManual;
  // The focus follows the first open item.
  for (auto& b : expected.active->iblocks)
    for (auto& l : b.lines) l.focused = false;
  line_of(expected, "FUEL_LEAK.FLK_FOB")->focused = true;
  CHECK(done == expected);

  ui.send(msg::Command{cmd::CheckAll{{"FUEL_LEAK", "FLK_1"}}});
  auto checked = display_after(ui);
  REQUIRE(checked.active);
  CHECK(line_of(checked, "FUEL_LEAK.FLK_FOB")->color == ColorCode::Green);
  CHECK(line_of(checked, "FUEL_LEAK.FLK_FOB")->status == ActionStatus::DoneManual);
  CHECK(checked.active->iblocks[0].completed);
  CHECK_FALSE(checked.active->iblocks[0].current);
  CHECK(checked.active->iblocks[1].current);
  CHECK(checked.reminder_bar == done.reminder_bar);
  CHECK(checked.stack == done.stack);

  sim.send(msg::StateUpdate{2, std::nullopt, {{"N1_ENG1", ParamValue{0.0}}}});
  auto popped = display_after(ui);
  REQUIRE(popped.popup);
  CHECK(popped.popup->procedure == "ENG_FAIL");
  CHECK(popped.popup->ecam);
  ui.send(msg::Command{cmd::AcknowledgePopup{"ENG_FAIL", false}});
  auto later = display_after(ui);
  CHECK_FALSE(later.popup);
  REQUIRE(later.reminder_bar.size() == 1);
  CHECK(later.reminder_bar[0].procedure == "ENG_FAIL");
  CHECK(later.active == popped.active);
  CHECK(later.stack == popped.stack);
}

TEST_CASE("server: a paused scenario advances only on step") {
  ServerOptions o;
  o.scenario = testing::scenario("fuel_leak");
  o.tick_rate = 0;
  Running r(std::move(o));
  testing::Client ui(r.port());
  ui.greet(r.hash(), PeerRole::Ui);
  auto first = std::get<msg::Display>(ui.message()).model;
  CHECK(first.tick == 0);
  ui.send(msg::Step{2});
  CHECK(events_in(ui.until_display()).empty());
  auto f2 = ui.until_display();
  auto model = std::get<msg::Display>(decode(f2.back())).model;
  CHECK(events_in(f2) == std::vector<std::string>{"PopupRaised FUEL_LEAK"});
  CHECK(model.tick == 5);
  CHECK(model.popup);
}

TEST_CASE("server: a paced scenario plays by itself") {
  ServerOptions o;
  o.scenario = testing::scenario("fuel_leak");
  o.tick_rate = 200;
  Running r(std::move(o));
  testing::Client ui(r.port());
  ui.greet(r.hash(), PeerRole::Ui);
  std::optional<std::string> seen;
  for (int i = 0; i < 50 && !seen; ++i) {
    for (const auto& e : events_in(ui.until_display()))
      if (e.rfind("PopupRaised FUEL_LEAK", 0) == 0) seen = e;
  }
  CHECK(seen);
}

TEST_CASE("server: bind failure") {
  Running r;
  Session s(testing::a320());
  ServerOptions o;
  o.port = r.port();
  FeedServer clash(s, o);
  try {
    clash.bind();
    FAIL("expected BindFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BindFailure);
  }
}
