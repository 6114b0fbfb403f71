#pragma once

#include <functional>
#include <memory>
#include <string>

#include "mcpforge/rpc/connection.hpp"
#include "mcpforge/rpc/message.hpp"

namespace mcpforge::rpc {

struct CallOutcome {
  enum class Status { kOk, kRpcError, kTimeout, kConnectionFailed };
  Status status = Status::kConnectionFailed;
  Json result;     // kOk
  RpcError error;  // kRpcError
  std::string detail;

  bool ok() const { return status == Status::kOk; }
};

// Invoked for server->client requests (sampling/createMessage,
// elicitation/create, ping) that arrive while a call is in flight.
using PeerRequestHandler = std::function<RpcMessage(const RpcMessage&)>;

// Observes inbound notifications (log/progress/list_changed).
using NotificationObserver = std::function<void(const RpcMessage&)>;

// A client's view of one server connection, independent of transport.
class Channel {
 public:
  virtual ~Channel() = default;

  virtual CallOutcome call(const std::string& method, Json params) = 0;
  virtual bool notify(const std::string& method, Json params) = 0;

  virtual ConnState state() const = 0;
  virtual FailReason fail_reason() const = 0;
  virtual FloodDetail flood_detail() const = 0;
  virtual ConnectionStats stats() const = 0;
  virtual std::string transport_kind() const = 0;
  virtual void close() = 0;

  void set_peer_request_handler(PeerRequestHandler handler) {
    peer_handler_ = std::move(handler);
  }
  void set_notification_observer(NotificationObserver observer) {
    notification_observer_ = std::move(observer);
  }

 protected:
  RpcMessage default_peer_response(const RpcMessage& request) const;
  PeerRequestHandler peer_handler_;
  NotificationObserver notification_observer_;
};

struct StdioLaunch {
  std::vector<std::string> argv;
  std::vector<std::pair<std::string, std::string>> env;
  bool quiet_stderr = true;
};

// Spawns the child and frames messages over its stdin/stdout.
std::unique_ptr<Channel> launch_stdio_channel(const StdioLaunch& launch,
                                              const TransportLimits& limits);

// Single-POST-per-message client for an already-running HTTP server.
std::unique_ptr<Channel> open_http_channel(const std::string& url,
                                           const TransportLimits& limits);

}  // namespace mcpforge::rpc
