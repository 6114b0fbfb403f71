#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "mcpforge/rpc/codec.hpp"
#include "mcpforge/rpc/limits.hpp"
#include "mcpforge/rpc/message.hpp"

namespace mcpforge::rpc {

enum class ConnState { kRunning, kClosed, kFailed };

// Why a connection entered kFailed.
enum class FailReason { kNone, kFlood, kIo };

// What specifically tripped the flood guard (diagnostic detail).
enum class FloodDetail { kNone, kOversizeLine, kRateExceeded, kQueueOverflow };

std::string_view conn_state_name(ConnState s);
std::string_view fail_reason_name(FailReason r);
std::string_view flood_detail_name(FloodDetail d);

struct ConnectionStats {
  std::size_t messages_in = 0;
  std::size_t messages_out = 0;
  std::size_t notifications_in = 0;
  std::size_t decode_errors = 0;
  std::size_t dropped_unsolicited = 0;
  // Peak bytes attributable to this connection (partial line + queued lines).
  std::size_t peak_buffered_bytes = 0;
  std::size_t peak_inbox_depth = 0;
};

// Byte-stream connection over a pair of fds with newline framing and always-on
// robustness limits: max line size, inbound rate, bounded inbox. Tripping any
// limit moves the connection to kFailed/kFlood and stops the reader; memory
// attributable to the connection stays bounded by
// max_line_bytes * (inbox_depth + 1).
class Connection {
 public:
  // Takes ownership of both fds.
  Connection(int read_fd, int write_fd, TransportLimits limits);
  ~Connection();
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  // Serializes and writes one framed message. Returns false after failure.
  bool send(const RpcMessage& message);

  // Next inbound message, FIFO. Empty on timeout or terminal state drained.
  std::optional<RpcMessage> pop(std::chrono::milliseconds timeout);

  ConnState state() const;
  FailReason fail_reason() const;
  FloodDetail flood_detail() const;
  ConnectionStats stats() const;
  const TransportLimits& limits() const { return limits_; }

  // Stops the reader and closes both fds.
  void shutdown();

 private:
  void reader_loop();
  void ingest_line(std::string line);
  void fail_flood(FloodDetail detail);

  TransportLimits limits_;
  int read_fd_;
  int write_fd_;
  int wake_pipe_[2] = {-1, -1};
  bool stop_requested_ = false;

  mutable std::mutex mu_;
  std::condition_variable inbox_cv_;
  std::deque<RpcMessage> inbox_;
  std::deque<std::size_t> inbox_line_sizes_;
  std::size_t inbox_bytes_ = 0;
  ConnState state_ = ConnState::kRunning;
  FailReason fail_reason_ = FailReason::kNone;
  FloodDetail flood_detail_ = FloodDetail::kNone;
  ConnectionStats stats_;

  std::mutex write_mu_;

  // Token bucket for the inbound rate limit.
  double tokens_;
  std::chrono::steady_clock::time_point last_refill_;

  std::thread reader_;
};

}  // namespace mcpforge::rpc
