/* Copyright 2026 The angiopipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "angio/backends/backend.hpp"

namespace angio {

inline constexpr int kDefaultTimeoutMs = 10000;

namespace detail {

inline void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

inline void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

/// Newline-framed duplex byte stream with a read deadline.
class LineChannel {
 public:
  virtual ~LineChannel() = default;

  void send_line(const std::string& line) {
    std::string data = line;
    data.push_back('\n');
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = write_some(data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(ErrorKind::kTransport, std::string("backend write failed: ") + std::strerror(errno));
      }
      off += std::size_t(n);
    }
  }

  std::string read_line(int timeout_ms) {
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                            deadline - std::chrono::steady_clock::now())
                            .count();
      if (left <= 0) fail(ErrorKind::kTimeout, "backend timed out");
      pollfd p{read_fd(), POLLIN, 0};
      const int rc = ::poll(&p, 1, int(left));
      if (rc < 0) {
        if (errno == EINTR) continue;
        fail(ErrorKind::kTransport, std::string("poll failed: ") + std::strerror(errno));
      }
      if (rc == 0) fail(ErrorKind::kTimeout, "backend timed out");
      char chunk[65536];
      const ssize_t n = ::read(read_fd(), chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        fail(ErrorKind::kTransport, std::string("backend read failed: ") + std::strerror(errno));
      }
      if (n == 0) fail(ErrorKind::kTransport, "backend closed the connection");
      buffer_.append(chunk, std::size_t(n));
    }
  }

 protected:
  virtual ssize_t write_some(const char* data, std::size_t len) = 0;
  virtual int read_fd() const = 0;

 private:
  std::string buffer_;
};

/// Child process spawned through /bin/sh -c, talking over its stdin/stdout.
class ProcessChannel final : public LineChannel {
 public:
  explicit ProcessChannel(const std::string& command) {
    ignore_sigpipe();
    int in_pipe[2], out_pipe[2];
    require(::pipe(in_pipe) == 0, "pipe failed", ErrorKind::kTransport);
    if (::pipe(out_pipe) != 0) {
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      fail(ErrorKind::kTransport, "pipe failed");
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
      fail(ErrorKind::kTransport, "fork failed");
    }
    if (pid_ == 0) {
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
    ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  }

  ~ProcessChannel() override {
    close_fd(to_child_);
    close_fd(from_child_);
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
  }

 protected:
  ssize_t write_some(const char* data, std::size_t len) override {
    return ::write(to_child_, data, len);
  }
  int read_fd() const override { return from_child_; }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
};

class TcpChannel final : public LineChannel {
 public:
  TcpChannel(const std::string& host, const std::string& port) {
    ignore_sigpipe();
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0)
      fail(ErrorKind::kTransport, "cannot resolve " + host + ": " + ::gai_strerror(rc));
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      fd_ = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
      if (fd_ < 0) continue;
      if (::connect(fd_, ai->ai_addr, ai->ai_addrlen) == 0) break;
      close_fd(fd_);
    }
    ::freeaddrinfo(res);
    require(fd_ >= 0, "cannot connect to " + host + ":" + port, ErrorKind::kTransport);
  }
  ~TcpChannel() override { close_fd(fd_); }

 protected:
  ssize_t write_some(const char* data, std::size_t len) override {
    return ::send(fd_, data, len, MSG_NOSIGNAL);
  }
  int read_fd() const override { return fd_; }

 private:
  int fd_ = -1;
};

}  // namespace detail

/// Endpoint forms: "tcp://host:port" or a shell command line.
class ExternalBackend final : public Backend {
 public:
  ExternalBackend(Stage stage, std::string endpoint, int timeout_ms = kDefaultTimeoutMs)
      : Backend(stage), endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {
    require(!endpoint_.empty(), "external backend needs an endpoint", ErrorKind::kConfig);
    require(timeout_ms_ > 0, "timeout must be positive", ErrorKind::kConfig);
  }

  std::size_t restarts() const {
    std::lock_guard lock(mu_);
    return restarts_;
  }

  /// Requests are serialized: one in flight per channel. A transport failure
  /// restarts the channel once and resends; a timeout drops the channel.
  InferenceResponse answer(const InferenceRequest& req) override {
    const std::string line = request_to_json(req).dump();
    const auto frame = req.meta.value("frame_index", std::size_t{0});
    std::lock_guard lock(mu_);
    for (int attempt = 0;; ++attempt) {
      try {
        if (!channel_) channel_ = open();
        channel_->send_line(line);
        const std::string reply = channel_->read_line(timeout_ms_);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(reply);
        } catch (const nlohmann::json::exception& e) {
          fail(ErrorKind::kMalformed, std::string("backend sent invalid JSON: ") + e.what());
        }
        return response_from_json(j, frame);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kTimeout) {
          channel_.reset();
          throw;
        }
        if (e.kind() != ErrorKind::kTransport) throw;
        channel_.reset();
        if (attempt >= 1) throw;
        ++restarts_;
      }
    }
  }

 private:
  std::unique_ptr<detail::LineChannel> open() const {
    constexpr std::string_view tcp = "tcp://";
    if (endpoint_.rfind(tcp, 0) == 0) {
      const std::string rest = endpoint_.substr(tcp.size());
      const auto colon = rest.rfind(':');
      require(colon != std::string::npos && colon + 1 < rest.size(),
              "tcp endpoint must be tcp://host:port", ErrorKind::kConfig);
      return std::make_unique<detail::TcpChannel>(rest.substr(0, colon),
                                                  rest.substr(colon + 1));
    }
    return std::make_unique<detail::ProcessChannel>(endpoint_);
  }

  std::string endpoint_;
  int timeout_ms_;
  mutable std::mutex mu_;
  std::unique_ptr<detail::LineChannel> channel_;
  std::size_t restarts_ = 0;
};

// --- configuration ----------------------------------------------------------

enum class BackendKind { Oracle, Constant, External };

template <>
struct EnumNames<BackendKind> {
  static constexpr std::array<std::string_view, 3> names = {"oracle", "constant",
                                                            "external"};
};

struct BackendDescriptor {
  Stage stage = Stage::Projection;
  BackendKind kind = BackendKind::Constant;
  std::string endpoint;  // external only
  nlohmann::json value;  // constant only
  int timeout_ms = kDefaultTimeoutMs;
};

/// {"kind": "oracle"} | {"kind": "constant", "value": ...} |
/// {"kind": "external", "endpoint": "...", "timeout_ms": n}
inline BackendDescriptor descriptor_from_json(Stage stage, const nlohmann::json& j) {
  try {
    BackendDescriptor d;
    d.stage = stage;
    d.kind = parse_enum_or_throw<BackendKind>(j.at("kind").get<std::string>(),
                                              "backend kind");
    d.endpoint = j.value("endpoint", std::string());
    d.timeout_ms = j.value("timeout_ms", kDefaultTimeoutMs);
    if (j.contains("value")) d.value = j.at("value");
    const bool external = d.kind == BackendKind::External;
    require(external == !d.endpoint.empty(),
            "backend '" + to_string(stage) + "': endpoint required iff kind is external",
            ErrorKind::kConfig);
    require(d.kind != BackendKind::Constant || !d.value.is_null(),
            "backend '" + to_string(stage) + "': constant backend needs a value",
            ErrorKind::kConfig);
    require(d.timeout_ms > 0, "backend timeout must be positive", ErrorKind::kConfig);
    return d;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, "backend '" + to_string(stage) + "': " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    fail(ErrorKind::kConfig, e.what());
  }
}

inline nlohmann::json descriptor_to_json(const BackendDescriptor& d) {
  nlohmann::json j{{"kind", to_string(d.kind)}};
  if (d.kind == BackendKind::Constant) j["value"] = d.value;
  if (d.kind == BackendKind::External) {
    j["endpoint"] = d.endpoint;
    j["timeout_ms"] = d.timeout_ms;
  }
  return j;
}

inline std::unique_ptr<Backend> make_backend(const BackendDescriptor& d,
                                             std::shared_ptr<const TruthRegistry> truth) {
  switch (d.kind) {
    case BackendKind::Oracle: return std::make_unique<OracleBackend>(d.stage, std::move(truth));
    case BackendKind::Constant: return ConstantBackend::from_json(d.stage, d.value);
    case BackendKind::External:
      return std::make_unique<ExternalBackend>(d.stage, d.endpoint, d.timeout_ms);
  }
  fail(ErrorKind::kConfig, "unknown backend kind");
}

}  // namespace angio
