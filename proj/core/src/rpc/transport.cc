// Copyright 2026 The hgnn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "hgnn/rpc/transport.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <string>

namespace hgnn::rpc {

Endpoint Endpoint::Parse(std::string_view text) {
  Endpoint e;
  if (text.rfind("unix:", 0) == 0) {
    e.kind = Kind::kUnix;
    e.path = std::string(text.substr(5));
    if (e.path.empty()) Throw(Errc::kInvalidArgument, "unix endpoint needs a path");
    if (e.path.size() >= sizeof(sockaddr_un{}.sun_path)) {
      Throw(Errc::kInvalidArgument, "unix socket path too long");
    }
    return e;
  }
  if (text.rfind("tcp:", 0) == 0) {
    e.kind = Kind::kTcp;
    const std::string_view rest = text.substr(4);
    const size_t colon = rest.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      Throw(Errc::kInvalidArgument, "tcp endpoint must be tcp:host:port");
    }
    e.host = std::string(rest.substr(0, colon));
    const std::string_view port = rest.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), e.port);
    if (ec != std::errc{} || ptr != port.data() + port.size()) {
      Throw(Errc::kInvalidArgument, "bad tcp port \"" + std::string(port) + "\"");
    }
    return e;
  }
  Throw(Errc::kInvalidArgument, "endpoint must start with unix: or tcp:");
}

std::string Endpoint::ToString() const {
  return kind == Kind::kUnix ? "unix:" + path : "tcp:" + host + ":" + std::to_string(port);
}

namespace net {

namespace {

[[noreturn]] void SysFail(const std::string& what) {
  Throw(Errc::kTransport, what + ": " + std::strerror(errno));
}

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list) freeaddrinfo(list);
  }
};

void Resolve(const Endpoint& e, bool passive, AddrInfo& out) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  const std::string port = std::to_string(e.port);
  const int rc = getaddrinfo(e.host.c_str(), port.c_str(), &hints, &out.list);
  if (rc != 0) Throw(Errc::kTransport, "cannot resolve " + e.host + ": " + gai_strerror(rc));
}

sockaddr_un UnixAddr(const std::string& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  return addr;
}

}  // namespace

int Connect(const Endpoint& e) {
  if (e.kind == Endpoint::Kind::kUnix) {
    const int fd = socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd < 0) SysFail("socket");
    const sockaddr_un addr = UnixAddr(e.path);
    if (connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const int err = errno;
      close(fd);
      errno = err;
      SysFail("connect " + e.ToString());
    }
    return fd;
  }
  AddrInfo ai;
  Resolve(e, false, ai);
  int last_errno = 0;
  for (addrinfo* a = ai.list; a != nullptr; a = a->ai_next) {
    const int fd = socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
    if (fd < 0) continue;
    if (connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
      const int one = 1;
      setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return fd;
    }
    last_errno = errno;
    close(fd);
  }
  errno = last_errno;
  SysFail("connect " + e.ToString());
}

void WriteAll(int fd, ByteSpan bytes) {
  size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = send(fd, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      SysFail("send");
    }
    done += static_cast<size_t>(n);
  }
}

bool ReadExact(int fd, MutableByteSpan out) {
  size_t done = 0;
  while (done < out.size()) {
    const ssize_t n = recv(fd, out.data() + done, out.size() - done, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      SysFail("recv");
    }
    if (n == 0) {
      if (done == 0) return false;
      Throw(Errc::kTransport, "connection closed mid-frame");
    }
    done += static_cast<size_t>(n);
  }
  return true;
}

void Close(int fd) {
  if (fd >= 0) close(fd);
}

}  // namespace net

// ---------------------------------------------------------------------------
// Transport

Bytes Transport::CallRaw(Opcode op, const Bytes& payload) {
  Frame request;
  request.opcode = static_cast<uint8_t>(op);
  request.request_id = next_id_++;
  request.payload = payload;
  Frame reply = RoundTrip(request);
  if (reply.request_id != request.request_id || reply.opcode != request.opcode) {
    Throw(Errc::kTransport, "reply does not match request " + std::to_string(request.request_id));
  }
  return std::move(reply.payload);
}

Payload Transport::Call(Opcode op, const Payload& request) {
  Payload reply = Payload::Decode(CallRaw(op, request.Encode()));
  RaiseIfError(reply);
  return reply;
}

SocketTransport::SocketTransport(const Endpoint& endpoint) : fd_(net::Connect(endpoint)) {}

SocketTransport::~SocketTransport() { net::Close(fd_); }

Frame SocketTransport::RoundTrip(const Frame& request) {
  std::lock_guard lock(mu_);
  net::WriteAll(fd_, EncodeFrame(request));
  uint8_t header[kHeaderSize];
  if (!net::ReadExact(fd_, header)) Throw(Errc::kTransport, "server closed the connection");
  FrameHeader h;
  try {
    h = DecodeFrameHeader(header);
  } catch (const Error& e) {
    Throw(Errc::kTransport, e.what());
  }
  Frame reply;
  reply.version = h.version;
  reply.opcode = h.opcode;
  reply.request_id = h.request_id;
  reply.payload.resize(h.payload_len);
  if (h.payload_len > 0 && !net::ReadExact(fd_, reply.payload)) {
    Throw(Errc::kTransport, "server closed the connection");
  }
  return reply;
}

// ---------------------------------------------------------------------------
// Server

Server::~Server() { Stop(); }

Endpoint Server::Start(const Endpoint& endpoint) {
  if (listen_fd_ >= 0) Throw(Errc::kFailedPrecondition, "server already started");
  bound_ = endpoint;
  if (endpoint.kind == Endpoint::Kind::kUnix) {
    listen_fd_ = socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (listen_fd_ < 0) Throw(Errc::kTransport, std::string("socket: ") + std::strerror(errno));
    unlink(endpoint.path.c_str());
    sockaddr_un addr{};
    addr.sun_family = AF_UNIX;
    std::memcpy(addr.sun_path, endpoint.path.c_str(), endpoint.path.size() + 1);
    if (bind(listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
      const std::string err = std::strerror(errno);
      net::Close(listen_fd_);
      listen_fd_ = -1;
      Throw(Errc::kTransport, "bind " + endpoint.ToString() + ": " + err);
    }
  } else {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* list = nullptr;
    const std::string port = std::to_string(endpoint.port);
    const int rc = getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &list);
    if (rc != 0) Throw(Errc::kTransport, "cannot resolve " + endpoint.host + ": " + gai_strerror(rc));
    std::string err = "no usable address";
    for (addrinfo* a = list; a != nullptr; a = a->ai_next) {
      const int fd = socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
      if (fd < 0) continue;
      const int one = 1;
      setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
      if (bind(fd, a->ai_addr, a->ai_addrlen) == 0) {
        listen_fd_ = fd;
        break;
      }
      err = std::strerror(errno);
      close(fd);
    }
    freeaddrinfo(list);
    if (listen_fd_ < 0) Throw(Errc::kTransport, "bind " + endpoint.ToString() + ": " + err);
    sockaddr_storage ss{};
    socklen_t len = sizeof(ss);
    getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&ss), &len);
    bound_.port = ss.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port)
                                           : ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
  }
  if (listen(listen_fd_, 64) != 0) {
    const std::string err = std::strerror(errno);
    net::Close(listen_fd_);
    listen_fd_ = -1;
    Throw(Errc::kTransport, "listen: " + err);
  }
  stopping_ = false;
  acceptor_ = std::thread([this] { AcceptLoop(); });
  return bound_;
}

void Server::Stop() {
  if (listen_fd_ < 0) return;
  stopping_ = true;
  shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  net::Close(listen_fd_);
  listen_fd_ = -1;
  {
    std::lock_guard lock(conns_mu_);
    for (auto& c : conns_) shutdown(c->fd, SHUT_RDWR);
  }
  Reap(true);
  if (bound_.kind == Endpoint::Kind::kUnix) unlink(bound_.path.c_str());
}

void Server::Reap(bool all) {
  std::list<std::unique_ptr<Connection>> finished;
  {
    std::lock_guard lock(conns_mu_);
    for (auto it = conns_.begin(); it != conns_.end();) {
      if (all || (*it)->done) {
        finished.push_back(std::move(*it));
        it = conns_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& c : finished) {
    if (c->thread.joinable()) c->thread.join();
    net::Close(c->fd);
  }
}

void Server::AcceptLoop() {
  while (!stopping_) {
    const int fd = accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    if (bound_.kind == Endpoint::Kind::kTcp) {
      const int one = 1;
      setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    }
    Reap(false);
    auto conn = std::make_unique<Connection>();
    conn->fd = fd;
    Connection* raw = conn.get();
    std::lock_guard lock(conns_mu_);
    if (stopping_) {
      shutdown(fd, SHUT_RDWR);
    }
    conns_.push_back(std::move(conn));
    raw->thread = std::thread([this, raw] { Serve(raw); });
  }
}

void Server::Serve(Connection* conn) {
  try {
    while (true) {
      uint8_t header[kHeaderSize];
      if (!net::ReadExact(conn->fd, header)) break;
      FrameHeader h;
      try {
        h = DecodeFrameHeader(header);
      } catch (const Error& e) {
        // The length field still delimits the frame unless it is oversized.
        ByteReader r(ByteSpan(header).subspan(sizeof(kMagic)));
        Frame reply;
        reply.version = r.Get<uint8_t>();
        reply.opcode = r.Get<uint8_t>();
        reply.request_id = r.Get<uint32_t>();
        const uint32_t len = r.Get<uint32_t>();
        reply.payload = ErrorPayload(e.code(), e.what());
        net::WriteAll(conn->fd, EncodeFrame(reply));
        if (len > kMaxPayload) break;
        Bytes skip(len);
        if (len > 0 && !net::ReadExact(conn->fd, skip)) break;
        continue;
      }
      Frame request;
      request.version = h.version;
      request.opcode = h.opcode;
      request.request_id = h.request_id;
      request.payload.resize(h.payload_len);
      if (h.payload_len > 0 && !net::ReadExact(conn->fd, request.payload)) break;
      net::WriteAll(conn->fd, EncodeFrame(service_.Handle(request)));
    }
  } catch (const Error&) {
    // Transport failure on this connection only.
  }
  shutdown(conn->fd, SHUT_RDWR);
  conn->done = true;
}

}  // namespace hgnn::rpc
