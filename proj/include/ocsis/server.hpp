#pragma once

// TCP feed server. Readers run one thread per connection and post frames
// to a single inbox; one engine thread applies them to the session in
// arrival order and broadcasts the resulting events and display to every
// UI connection.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "ocsis/error.hpp"
#include "ocsis/protocol.hpp"
#include "ocsis/scenario.hpp"

namespace ocsis {

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  // Scenario playback paced at `tick_rate` ticks per second; 0 waits for
  // `step` messages. Scripted commands are ignored: the pilot is the UI.
  std::optional<Scenario> scenario;
  double tick_rate = 1.0;
  // Receives every applied input and every event, in inbox order, so a
  // live session can be replayed offline.
  std::function<void(const TraceRecord&)> record;
  // Connection-level diagnostics (decode errors, rejected handshakes).
  std::function<void(const std::string&)> log;
};

class FeedServer {
 public:
  FeedServer(Session& session, ServerOptions options);
  ~FeedServer();
  FeedServer(const FeedServer&) = delete;
  FeedServer& operator=(const FeedServer&) = delete;

  // Throws Error(BindFailure). Returns the bound port.
  std::uint16_t bind();
  // Serves until stop(). Requires bind().
  void run();
  // Safe from any thread.
  void stop();

  std::uint16_t port() const { return port_; }

 private:
  struct Connection {
    int fd = -1;
    bool greeted = false;
    PeerRole role = PeerRole::Ui;
    bool closing = false;
  };

  struct InboxItem {
    enum class Type { Opened, Frame, Overflow, Closed } type = Type::Frame;
    int conn = 0;
    int fd = -1;  // Opened only
    std::string frame;
  };

  void accept_loop();
  void read_loop(int conn, int fd);
  void post(InboxItem item);
  void handle(const InboxItem& item);
  void handle_message(int conn, Connection& c, const WireMessage& m);
  void apply_state(FlightState state);
  void play_step();
  void broadcast(const std::vector<EngineEvent>& events);
  void send(int conn, const WireMessage& m);
  void send_raw(Connection& c, const std::string& frame);
  void reply_error(int conn, ErrorCode code, const std::string& message);
  void close_connection(int conn);
  void record(TraceDir dir, std::int64_t tick, std::string payload);
  void note(const std::string& text);

  Session& session_;
  ServerOptions options_;
  int listen_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  std::mutex inbox_mutex_;
  std::condition_variable inbox_cv_;
  std::deque<InboxItem> inbox_;

  // Acceptor-owned, joined by the engine thread when a connection closes.
  std::mutex readers_mutex_;
  std::map<int, std::thread> readers_;
  int next_conn_ = 1;

  // Engine-thread state.
  std::map<int, Connection> conns_;
  std::optional<int> simulator_;
  std::optional<FlightState> last_state_;
  std::unique_ptr<StatePlayer> player_;
};

}  // namespace ocsis
