#include <httplib.h>

#include <memory>

#include "mcpforge/rpc/channel.hpp"

namespace mcpforge::rpc {

namespace {

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/rpc";
  bool ok = false;
};

ParsedUrl parse_http_url(const std::string& url) {
  ParsedUrl out;
  const std::string prefix = "http://";
  if (url.rfind(prefix, 0) != 0) return out;
  std::string rest = url.substr(prefix.size());
  const auto slash = rest.find('/');
  if (slash != std::string::npos) {
    out.path = rest.substr(slash);
    rest = rest.substr(0, slash);
  }
  const auto colon = rest.find(':');
  if (colon == std::string::npos) {
    out.host = rest;
  } else {
    out.host = rest.substr(0, colon);
    try {
      out.port = std::stoi(rest.substr(colon + 1));
    } catch (...) {
      return out;
    }
  }
  out.ok = !out.host.empty();
  return out;
}

class HttpChannel final : public Channel {
 public:
  HttpChannel(const ParsedUrl& url, const TransportLimits& limits)
      : limits_(limits), path_(url.path), client_(url.host, url.port) {
    client_.set_connection_timeout(5, 0);
    const int timeout_sec = std::max(1, limits.reply_timeout_ms / 1000);
    client_.set_read_timeout(timeout_sec, 0);
    client_.set_write_timeout(timeout_sec, 0);
  }

  CallOutcome call(const std::string& method, Json params) override {
    if (state_ != ConnState::kRunning)
      return CallOutcome{CallOutcome::Status::kConnectionFailed, {}, {},
                         std::string(fail_reason_name(fail_reason_))};
    const std::int64_t id = next_id_++;
    const std::string body =
        encode_line(make_request(id, method, std::move(params)));
    auto res = client_.Post(path_, body, "application/json");
    ++stats_.messages_out;
    if (!res) {
      state_ = ConnState::kFailed;
      fail_reason_ = FailReason::kIo;
      return CallOutcome{CallOutcome::Status::kConnectionFailed, {}, {},
                         "http transport error"};
    }
    if (res->body.size() > limits_.max_line_bytes) {
      state_ = ConnState::kFailed;
      fail_reason_ = FailReason::kFlood;
      flood_detail_ = FloodDetail::kOversizeLine;
      return CallOutcome{CallOutcome::Status::kConnectionFailed, {}, {},
                         "oversize response body"};
    }
    DecodeOutcome outcome = decode_line(res->body, limits_.max_line_bytes);
    if (!decode_ok(outcome)) {
      ++stats_.decode_errors;
      return CallOutcome{CallOutcome::Status::kConnectionFailed, {}, {},
                         "undecodable response body"};
    }
    const RpcMessage& msg = decoded(outcome);
    ++stats_.messages_in;
    if (!msg.is_response() || !(msg.id == RpcId{id})) {
      ++stats_.dropped_unsolicited;
      return CallOutcome{CallOutcome::Status::kConnectionFailed, {}, {},
                         "response id mismatch"};
    }
    if (msg.error)
      return CallOutcome{CallOutcome::Status::kRpcError, {}, *msg.error, ""};
    return CallOutcome{CallOutcome::Status::kOk,
                       msg.result ? *msg.result : Json(nullptr),
                       {},
                       ""};
  }

  bool notify(const std::string& method, Json params) override {
    if (state_ != ConnState::kRunning) return false;
    const std::string body =
        encode_line(make_notification(method, std::move(params)));
    auto res = client_.Post(path_, body, "application/json");
    ++stats_.messages_out;
    return static_cast<bool>(res);
  }

  ConnState state() const override { return state_; }
  FailReason fail_reason() const override { return fail_reason_; }
  FloodDetail flood_detail() const override { return flood_detail_; }
  ConnectionStats stats() const override { return stats_; }
  std::string transport_kind() const override { return "http"; }
  void close() override { state_ = ConnState::kClosed; }

 private:
  TransportLimits limits_;
  std::string path_;
  httplib::Client client_;
  std::int64_t next_id_ = 1;
  ConnState state_ = ConnState::kRunning;
  FailReason fail_reason_ = FailReason::kNone;
  FloodDetail flood_detail_ = FloodDetail::kNone;
  ConnectionStats stats_;
};

}  // namespace

std::unique_ptr<Channel> open_http_channel(const std::string& url,
                                           const TransportLimits& limits) {
  const ParsedUrl parsed = parse_http_url(url);
  if (!parsed.ok) return nullptr;
  return std::make_unique<HttpChannel>(parsed, limits);
}

}  // namespace mcpforge::rpc
