#include "ocsis/server.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "ocsis/error.hpp"

namespace ocsis {

namespace {

using Clock = std::chrono::steady_clock;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

FeedServer::FeedServer(Session& session, ServerOptions options)
    : session_(session), options_(std::move(options)) {
  if (options_.scenario) player_ = std::make_unique<StatePlayer>(*options_.scenario);
}

FeedServer::~FeedServer() {
  stop();
  if (acceptor_.joinable()) acceptor_.join();
  for (auto& [id, c] : conns_) {
    if (c.fd >= 0) ::shutdown(c.fd, SHUT_RDWR);
  }
  {
    std::lock_guard lock(readers_mutex_);
    for (auto& [id, t] : readers_) {
      if (t.joinable()) t.join();
    }
  }
  for (auto& [id, c] : conns_) {
    if (c.fd >= 0) ::close(c.fd);
  }
  // Connections accepted but never seen by the engine thread.
  for (auto& item : inbox_) {
    if (item.type == InboxItem::Type::Opened && conns_.count(item.conn) == 0) ::close(item.fd);
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
  for (int fd : wake_pipe_) {
    if (fd >= 0) ::close(fd);
  }
}

std::uint16_t FeedServer::bind() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* found = nullptr;
  auto service = std::to_string(options_.port);
  if (int rc = ::getaddrinfo(options_.host.c_str(), service.c_str(), &hints, &found); rc != 0) {
    throw Error(ErrorCode::BindFailure, "cannot resolve " + options_.host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no address";
  for (auto* ai = found; ai != nullptr; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = std::strerror(errno);
      continue;
    }
    int yes = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(found);
  if (listen_fd_ < 0) {
    throw Error(ErrorCode::BindFailure, "cannot listen on " + options_.host + ":" + service + ": " + last_error);
  }
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port
                                           : reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  if (::pipe(wake_pipe_) != 0) throw Error(ErrorCode::BindFailure, "cannot create wake pipe");
  return port_;
}

void FeedServer::stop() {
  if (stopping_.exchange(true)) return;
  if (wake_pipe_[1] >= 0) {
    char b = 0;
    [[maybe_unused]] auto n = ::write(wake_pipe_[1], &b, 1);
  }
  std::lock_guard lock(inbox_mutex_);
  inbox_cv_.notify_all();
}

void FeedServer::post(InboxItem item) {
  std::lock_guard lock(inbox_mutex_);
  inbox_.push_back(std::move(item));
  inbox_cv_.notify_one();
}

void FeedServer::note(const std::string& text) {
  if (options_.log) options_.log(text);
}

void FeedServer::record(TraceDir dir, std::int64_t tick, std::string payload) {
  if (options_.record) options_.record(TraceRecord{tick, dir, std::move(payload)});
}

// ---------------------------------------------------------------------------
// Socket threads

void FeedServer::accept_loop() {
  pollfd fds[2] = {{listen_fd_, POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
  while (!stopping_) {
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (fds[1].revents != 0) break;
    if ((fds[0].revents & POLLIN) == 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    int id = next_conn_++;
    post(InboxItem{InboxItem::Type::Opened, id, fd, {}});
    std::lock_guard lock(readers_mutex_);
    readers_.emplace(id, std::thread(&FeedServer::read_loop, this, id, fd));
  }
}

void FeedServer::read_loop(int conn, int fd) {
  FrameReader reader;
  char buf[4096];
  while (true) {
    auto n = ::recv(fd, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    reader.feed(std::string_view(buf, static_cast<std::size_t>(n)));
    if (reader.take_overflow()) post(InboxItem{InboxItem::Type::Overflow, conn, -1, {}});
    while (auto frame = reader.next()) post(InboxItem{InboxItem::Type::Frame, conn, -1, std::move(*frame)});
  }
  post(InboxItem{InboxItem::Type::Closed, conn, -1, {}});
}

// ---------------------------------------------------------------------------
// Engine thread

void FeedServer::run() {
  if (listen_fd_ < 0) throw Error(ErrorCode::BindFailure, "run() before bind()");
  acceptor_ = std::thread(&FeedServer::accept_loop, this);

  bool paced = player_ && options_.tick_rate > 0;
  auto deadline = Clock::now();
  while (true) {
    std::unique_lock lock(inbox_mutex_);
    auto ready = [&] { return stopping_ || !inbox_.empty(); };
    if (paced && !player_->done()) {
      inbox_cv_.wait_until(lock, deadline, ready);
    } else {
      inbox_cv_.wait(lock, ready);
    }
    if (stopping_) break;
    if (!inbox_.empty()) {
      auto item = std::move(inbox_.front());
      inbox_.pop_front();
      lock.unlock();
      handle(item);
      continue;
    }
    lock.unlock();
    if (paced && !player_->done() && Clock::now() >= deadline) {
      auto from = *player_->next_tick();
      play_step();
      if (auto to = player_->next_tick()) {
        deadline += std::chrono::duration_cast<Clock::duration>(
            std::chrono::duration<double>(static_cast<double>(*to - from) / options_.tick_rate));
      }
    }
  }
  if (acceptor_.joinable()) acceptor_.join();
}

void FeedServer::handle(const InboxItem& item) {
  switch (item.type) {
    case InboxItem::Type::Opened: {
      conns_[item.conn] = Connection{item.fd, false, PeerRole::Ui, false};
      send(item.conn, msg::Hello{kProtocolVersion, session_.set_hash(), std::nullopt});
      return;
    }
    case InboxItem::Type::Closed: {
      auto it = conns_.find(item.conn);
      if (it != conns_.end()) {
        ::close(it->second.fd);
        conns_.erase(it);
      }
      if (simulator_ == item.conn) simulator_.reset();
      std::thread t;
      {
        std::lock_guard lock(readers_mutex_);
        if (auto r = readers_.find(item.conn); r != readers_.end()) {
          t = std::move(r->second);
          readers_.erase(r);
        }
      }
      if (t.joinable()) t.join();
      return;
    }
    case InboxItem::Type::Overflow:
      reply_error(item.conn, ErrorCode::MalformedFrame, "frame longer than " + std::to_string(kMaxFrameBytes) + " bytes");
      return;
    case InboxItem::Type::Frame:
      break;
  }

  auto it = conns_.find(item.conn);
  if (it == conns_.end() || it->second.closing) return;
  auto& c = it->second;
  WireMessage m;
  try {
    m = decode(item.frame);
  } catch (const Error& e) {
    note("connection " + std::to_string(item.conn) + ": " + e.what());
    reply_error(item.conn, e.code(), e.what());
    if (!c.greeted) close_connection(item.conn);
    return;
  }
  handle_message(item.conn, c, m);
}

void FeedServer::handle_message(int conn, Connection& c, const WireMessage& m) {
  if (!c.greeted) {
    const auto* hello = std::get_if<msg::Hello>(&m);
    if (hello == nullptr) {
      reply_error(conn, ErrorCode::MalformedFrame, "expected hello, got " + std::string(message_kind(m)));
      close_connection(conn);
      return;
    }
    if (hello->procedure_set_hash != session_.set_hash()) {
      note("connection " + std::to_string(conn) + ": procedure set hash mismatch");
      reply_error(conn, ErrorCode::HashMismatch,
                  "server runs procedure set " + session_.set_hash() + ", client has " + hello->procedure_set_hash);
      close_connection(conn);
      return;
    }
    auto role = hello->role.value_or(PeerRole::Ui);
    if (role == PeerRole::Simulator && simulator_) {
      reply_error(conn, ErrorCode::IllegalTransition, "a simulator is already connected");
      close_connection(conn);
      return;
    }
    c.greeted = true;
    c.role = role;
    if (role == PeerRole::Simulator) {
      simulator_ = conn;
    } else {
      send(conn, msg::Display{session_.display_model()});
    }
    return;
  }

  std::visit(overloaded{
                 [&](const msg::StateUpdate& u) {
                   if (c.role != PeerRole::Simulator) {
                     reply_error(conn, ErrorCode::IllegalTransition, "only the simulator connection feeds state");
                     return;
                   }
                   auto state = last_state_.value_or(FlightState{});
                   state.tick = u.tick;
                   if (u.phase) state.phase = *u.phase;
                   for (const auto& [name, value] : u.assignments) {
                     if (value) {
                       state.values[name] = *value;
                     } else {
                       state.values.erase(name);
                     }
                   }
                   try {
                     apply_state(std::move(state));
                   } catch (const Error& e) {
                     reply_error(conn, e.code(), e.what());
                   }
                 },
                 [&](const msg::Command& cm) {
                   std::vector<EngineEvent> events;
                   try {
                     events = session_.apply_command(cm.command);
                   } catch (const Error& e) {
                     reply_error(conn, e.code(), e.what());
                     return;
                   }
                   record(TraceDir::Command, session_.tick(), format_command(cm.command));
                   broadcast(events);
                 },
                 [&](const msg::SnapshotRequest&) { send(conn, msg::SnapshotReply{session_.snapshot().blob}); },
                 [&](const msg::Step& s) {
                   if (!player_ || player_->done()) {
                     reply_error(conn, ErrorCode::IllegalTransition, "no scenario steps left to play");
                     return;
                   }
                   for (int i = 0; i < s.steps && !player_->done(); ++i) play_step();
                 },
                 [&](const msg::ErrorReply& e) { note("connection " + std::to_string(conn) + " reports " + e.code + ": " + e.message); },
                 [&](const auto& other) {
                   reply_error(conn, ErrorCode::UnknownMessageKind,
                               "clients may not send " + std::string(message_kind(WireMessage{other})));
                 },
             },
             m);
}

void FeedServer::apply_state(FlightState state) {
  auto events = session_.apply_state(state);
  record(TraceDir::State, state.tick, format_state(state));
  last_state_ = std::move(state);
  broadcast(events);
}

void FeedServer::play_step() {
  auto state = player_->next();
  try {
    apply_state(std::move(state));
  } catch (const Error& e) {
    note(std::string("scenario state rejected: ") + e.what());
  }
}

void FeedServer::broadcast(const std::vector<EngineEvent>& events) {
  for (const auto& e : events) record(TraceDir::Event, e.tick, std::to_string(e.seq) + " " + format_payload(e.payload));
  std::vector<std::string> frames;
  for (const auto& e : events) frames.push_back(encode(msg::Event{e}));
  frames.push_back(encode(msg::Display{session_.display_model()}));
  for (auto& [id, c] : conns_) {
    if (!c.greeted || c.closing || c.role != PeerRole::Ui) continue;
    for (const auto& f : frames) send_raw(c, f);
  }
}

void FeedServer::send(int conn, const WireMessage& m) {
  auto it = conns_.find(conn);
  if (it == conns_.end() || it->second.closing) return;
  send_raw(it->second, encode(m));
}

void FeedServer::send_raw(Connection& c, const std::string& frame) {
  if (c.closing) return;
  std::string out = frame + "\n";
  std::size_t sent = 0;
  while (sent < out.size()) {
    auto n = ::send(c.fd, out.data() + sent, out.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      c.closing = true;
      ::shutdown(c.fd, SHUT_RDWR);
      return;
    }
    sent += static_cast<std::size_t>(n);
  }
}

void FeedServer::reply_error(int conn, ErrorCode code, const std::string& message) {
  send(conn, msg::ErrorReply{std::string(to_string(code)), message});
}

void FeedServer::close_connection(int conn) {
  auto it = conns_.find(conn);
  if (it == conns_.end() || it->second.closing) return;
  it->second.closing = true;
  ::shutdown(it->second.fd, SHUT_RDWR);
}

}  // namespace ocsis
