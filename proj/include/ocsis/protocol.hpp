#pragma once

// Feed protocol: newline-delimited JSON frames, each an object with a
// `kind` field. Field-by-field schema in docs/protocol.md.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ocsis/engine.hpp"

namespace ocsis {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxFrameBytes = 1 << 20;

enum class PeerRole { Ui, Simulator };
std::string_view to_string(PeerRole role);

namespace msg {
struct Hello {
  int protocol_version = kProtocolVersion;
  std::string procedure_set_hash;
  std::optional<PeerRole> role;  // sent by clients; absent in the server greeting
  bool operator==(const Hello&) const = default;
};
struct StateUpdate {
  std::int64_t tick = 0;
  std::optional<FlightPhase> phase;  // unchanged when absent
  // nullopt removes the parameter from the state.
  std::map<std::string, std::optional<ParamValue>> assignments;
  bool operator==(const StateUpdate&) const = default;
};
struct Command {
  PilotCommand command;
  bool operator==(const Command&) const = default;
};
struct Event {
  EngineEvent event;
  bool operator==(const Event&) const = default;
};
struct Display {
  DisplayModel model;
  bool operator==(const Display&) const = default;
};
struct SnapshotRequest {
  bool operator==(const SnapshotRequest&) const = default;
};
struct SnapshotReply {
  std::string blob;
  bool operator==(const SnapshotReply&) const = default;
};
struct ErrorReply {
  std::string code;
  std::string message;
  bool operator==(const ErrorReply&) const = default;
};
// Advances a paused scenario playback by `steps` timeline entries.
struct Step {
  int steps = 1;
  bool operator==(const Step&) const = default;
};
}  // namespace msg

using WireMessage = std::variant<msg::Hello, msg::StateUpdate, msg::Command, msg::Event, msg::Display,
                                 msg::SnapshotRequest, msg::SnapshotReply, msg::ErrorReply, msg::Step>;

std::string_view message_kind(const WireMessage& m);

// One frame without the trailing newline.
std::string encode(const WireMessage& m);

// Throws Error(MalformedFrame), Error(UnknownMessageKind), or
// Error(UnsupportedVersion) for a Hello with another protocol version.
WireMessage decode(std::string_view frame);

// Splits a byte stream into frames. A line longer than kMaxFrameBytes is
// discarded and counted by take_overflow().
class FrameReader {
 public:
  void feed(std::string_view bytes);
  // Next complete line, without the newline (a trailing CR is removed).
  std::optional<std::string> next();
  // True if an oversized line was discarded since the last call.
  bool take_overflow();

 private:
  std::string buffer_;
  bool discarding_ = false;
  int overflows_ = 0;
};

}  // namespace ocsis
