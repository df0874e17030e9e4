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


// Transports: direct in-process calls, and a framed byte stream over Unix
// domain or TCP sockets. Endpoints are written "unix:/path/to/socket" or
// "tcp:host:port" (port 0 binds an ephemeral port).

#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "hgnn/rpc/protocol.h"
#include "hgnn/rpc/service.h"

namespace hgnn::rpc {

struct Endpoint {
  enum class Kind : uint8_t { kUnix, kTcp };
  Kind kind = Kind::kUnix;
  std::string path;  // kUnix
  std::string host;  // kTcp
  uint16_t port = 0;

  // Throws kInvalidArgument on a malformed address.
  static Endpoint Parse(std::string_view text);
  std::string ToString() const;
};

namespace net {
// Raw socket helpers; failures throw kTransport.
int Connect(const Endpoint& endpoint);
void WriteAll(int fd, ByteSpan bytes);
// Returns false on a clean end of stream before the first byte.
bool ReadExact(int fd, MutableByteSpan out);
void Close(int fd);
}  // namespace net

class Transport {
 public:
  virtual ~Transport() = default;

  // Sends one frame and returns the matching reply frame.
  virtual Frame RoundTrip(const Frame& request) = 0;

  // Returns the raw reply payload, error records included.
  Bytes CallRaw(Opcode op, const Bytes& payload);
  // Decoded reply; error records are raised as Error.
  Payload Call(Opcode op, const Payload& request);

 private:
  std::atomic<uint32_t> next_id_{1};
};

class InProcessTransport : public Transport {
 public:
  explicit InProcessTransport(Service& service) : service_(service) {}
  Frame RoundTrip(const Frame& request) override { return service_.Handle(request); }

 private:
  Service& service_;
};

class SocketTransport : public Transport {
 public:
  explicit SocketTransport(const Endpoint& endpoint);
  ~SocketTransport() override;
  SocketTransport(const SocketTransport&) = delete;
  SocketTransport& operator=(const SocketTransport&) = delete;

  Frame RoundTrip(const Frame& request) override;

 private:
  std::mutex mu_;  // one request in flight per connection
  int fd_ = -1;
};

class Server {
 public:
  explicit Server(Service& service) : service_(service) {}
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting; returns the bound endpoint.
  Endpoint Start(const Endpoint& endpoint);
  void Stop();
  const Endpoint& endpoint() const { return bound_; }

 private:
  struct Connection {
    int fd = -1;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void AcceptLoop();
  void Serve(Connection* conn);
  void Reap(bool all);

  Service& service_;
  Endpoint bound_;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex conns_mu_;
  std::list<std::unique_ptr<Connection>> conns_;
};

}  // namespace hgnn::rpc
