#include <atomic>
#include <chrono>

#include "mcpforge/rpc/channel.hpp"
#include "mcpforge/rpc/method.hpp"
#include "mcpforge/util/subprocess.hpp"

namespace mcpforge::rpc {

RpcMessage Channel::default_peer_response(const RpcMessage& request) const {
  // Without a host-side policy attached, interactive requests get refusals.
  if (request.method == method_name(Method::kElicitationCreate))
    return make_result(request.id, Json{{"action", "decline"}});
  if (request.method == method_name(Method::kSamplingCreateMessage))
    return make_error(request.id, kInternalError, "sampling unavailable");
  if (request.method == method_name(Method::kPing))
    return make_result(request.id, Json::object());
  return make_error(request.id, kMethodNotFound,
                    "unsupported client method: " + request.method);
}

namespace {

class StdioChannel final : public Channel {
 public:
  StdioChannel(util::Subprocess child, const TransportLimits& limits)
      : child_(std::move(child)),
        connection_(child_.stdout_fd(), child_.stdin_fd(), limits) {
    // Connection took ownership of the fds.
    child_.forget_fds();
  }

  ~StdioChannel() override { close(); }

  CallOutcome call(const std::string& method, Json params) override {
    const std::int64_t id = next_id_++;
    RpcMessage request = make_request(id, method, std::move(params));
    if (connection_.state() != ConnState::kRunning ||
        !connection_.send(request)) {
      return failed_outcome();
    }
    const auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::milliseconds(connection_.limits().reply_timeout_ms);
    for (;;) {
      const auto now = std::chrono::steady_clock::now();
      if (now >= deadline)
        return CallOutcome{CallOutcome::Status::kTimeout, {}, {},
                           "no response to " + method};
      auto msg = connection_.pop(
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now));
      if (!msg) {
        if (connection_.state() != ConnState::kRunning) return failed_outcome();
        continue;
      }
      if (msg->is_notification()) {
        if (notification_observer_) notification_observer_(*msg);
        continue;
      }
      if (msg->is_request()) {
        RpcMessage reply = peer_handler_ ? peer_handler_(*msg)
                                         : default_peer_response(*msg);
        connection_.send(reply);
        continue;
      }
      // Response: correlate strictly by id.
      if (msg->id == RpcId{id}) {
        if (msg->error)
          return CallOutcome{CallOutcome::Status::kRpcError, {}, *msg->error,
                             ""};
        return CallOutcome{CallOutcome::Status::kOk,
                           msg->result ? *msg->result : Json(nullptr),
                           {},
                           ""};
      }
      // Unsolicited response: logged (counter) and dropped.
      dropped_responses_++;
    }
  }

  bool notify(const std::string& method, Json params) override {
    return connection_.send(make_notification(method, std::move(params)));
  }

  ConnState state() const override { return connection_.state(); }
  FailReason fail_reason() const override { return connection_.fail_reason(); }
  FloodDetail flood_detail() const override {
    return connection_.flood_detail();
  }
  ConnectionStats stats() const override {
    ConnectionStats s = connection_.stats();
    s.dropped_unsolicited = dropped_responses_;
    return s;
  }
  std::string transport_kind() const override { return "stdio"; }

  void close() override {
    connection_.shutdown();
    child_.terminate();
  }

 private:
  CallOutcome failed_outcome() const {
    CallOutcome out;
    out.status = CallOutcome::Status::kConnectionFailed;
    out.detail = std::string(fail_reason_name(connection_.fail_reason()));
    return out;
  }

  util::Subprocess child_;
  Connection connection_;
  std::int64_t next_id_ = 1;
  std::atomic<std::size_t> dropped_responses_{0};
};

}  // namespace

std::unique_ptr<Channel> launch_stdio_channel(const StdioLaunch& launch,
                                              const TransportLimits& limits) {
  util::Subprocess::Options options;
  options.argv = launch.argv;
  options.extra_env = launch.env;
  options.quiet_stderr = launch.quiet_stderr;
  return std::make_unique<StdioChannel>(util::Subprocess::spawn(options),
                                        limits);
}

}  // namespace mcpforge::rpc
