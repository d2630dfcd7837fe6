#pragma once

// Minimal blocking NDJSON client for server tests.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <optional>
#include <stdexcept>
#include <string>

#include "ocsis/protocol.hpp"

namespace testing {

class Client {
 public:
  explicit Client(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    timeval tv{5, 0};
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      throw std::runtime_error("connect failed");
    }
  }
  ~Client() { close(); }
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

  void send_raw(const std::string& bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
      auto n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
      if (n <= 0) throw std::runtime_error("send failed");
      sent += static_cast<std::size_t>(n);
    }
  }
  void send(const ocsis::WireMessage& m) { send_raw(ocsis::encode(m) + "\n"); }

  // Next frame, or nullopt on end of stream or timeout.
  std::optional<std::string> frame() {
    while (true) {
      if (auto f = reader_.next()) return f;
      char buf[65536];
      auto n = ::recv(fd_, buf, sizeof buf, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return std::nullopt;
      reader_.feed(std::string_view(buf, static_cast<std::size_t>(n)));
    }
  }

  ocsis::WireMessage message() {
    auto f = frame();
    if (!f) throw std::runtime_error("connection closed or timed out");
    return ocsis::decode(*f);
  }

  // Frames up to and including the next display frame.
  std::vector<std::string> until_display() {
    std::vector<std::string> out;
    while (auto f = frame()) {
      out.push_back(*f);
      if (std::holds_alternative<ocsis::msg::Display>(ocsis::decode(*f))) return out;
    }
    throw std::runtime_error("no display frame");
  }

  // Reads the server hello and answers it.
  ocsis::msg::Hello greet(const std::string& hash, ocsis::PeerRole role) {
    auto hello = std::get<ocsis::msg::Hello>(message());
    send(ocsis::msg::Hello{ocsis::kProtocolVersion, hash, role});
    return hello;
  }

 private:
  int fd_ = -1;
  ocsis::FrameReader reader_;
};

}  // namespace testing
