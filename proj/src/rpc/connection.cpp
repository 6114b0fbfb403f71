#include "mcpforge/rpc/connection.hpp"

#include <fcntl.h>
#include <poll.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>

namespace mcpforge::rpc {
namespace {

// Writing to a peer that already died must surface as an IO failure on
// this connection, not kill the whole process.
const bool kSigpipeIgnored = [] {
  std::signal(SIGPIPE, SIG_IGN);
  return true;
}();

}  // namespace

std::string_view conn_state_name(ConnState s) {
  switch (s) {
    case ConnState::kRunning: return "running";
    case ConnState::kClosed: return "closed";
    case ConnState::kFailed: return "failed";
  }
  return "?";
}

std::string_view fail_reason_name(FailReason r) {
  switch (r) {
    case FailReason::kNone: return "none";
    case FailReason::kFlood: return "flood";
    case FailReason::kIo: return "io";
  }
  return "?";
}

std::string_view flood_detail_name(FloodDetail d) {
  switch (d) {
    case FloodDetail::kNone: return "none";
    case FloodDetail::kOversizeLine: return "oversize-line";
    case FloodDetail::kRateExceeded: return "rate-exceeded";
    case FloodDetail::kQueueOverflow: return "queue-overflow";
  }
  return "?";
}

Connection::Connection(int read_fd, int write_fd, TransportLimits limits)
    : limits_(limits),
      read_fd_(read_fd),
      write_fd_(write_fd),
      tokens_(static_cast<double>(limits.max_messages_per_sec)),
      last_refill_(std::chrono::steady_clock::now()) {
  (void)kSigpipeIgnored;
  if (::pipe2(wake_pipe_, O_CLOEXEC) != 0) wake_pipe_[0] = wake_pipe_[1] = -1;
  reader_ = std::thread([this] { reader_loop(); });
}

Connection::~Connection() { shutdown(); }

void Connection::shutdown() {
  {
    std::lock_guard lock(mu_);
    if (state_ == ConnState::kRunning) state_ = ConnState::kClosed;
    stop_requested_ = true;
  }
  if (wake_pipe_[1] >= 0) {
    const char byte = 'x';
    [[maybe_unused]] ssize_t r = ::write(wake_pipe_[1], &byte, 1);
  }
  if (reader_.joinable()) reader_.join();
  {
    std::lock_guard lock(write_mu_);
    if (write_fd_ >= 0) {
      ::close(write_fd_);
      write_fd_ = -1;
    }
  }
  if (read_fd_ >= 0) {
    ::close(read_fd_);
    read_fd_ = -1;
  }
  for (int& fd : wake_pipe_) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
  inbox_cv_.notify_all();
}

bool Connection::send(const RpcMessage& message) {
  const std::string line = encode_line(message) + "\n";
  std::lock_guard lock(write_mu_);
  if (write_fd_ < 0) return false;
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::write(write_fd_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      std::lock_guard state_lock(mu_);
      if (state_ == ConnState::kRunning) {
        state_ = ConnState::kFailed;
        fail_reason_ = FailReason::kIo;
      }
      inbox_cv_.notify_all();
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  std::lock_guard state_lock(mu_);
  ++stats_.messages_out;
  return true;
}

std::optional<RpcMessage> Connection::pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  inbox_cv_.wait_for(lock, timeout, [this] {
    return !inbox_.empty() || state_ != ConnState::kRunning;
  });
  if (inbox_.empty()) return std::nullopt;
  RpcMessage m = std::move(inbox_.front());
  inbox_.pop_front();
  inbox_bytes_ -= inbox_line_sizes_.front();
  inbox_line_sizes_.pop_front();
  return m;
}

ConnState Connection::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

FailReason Connection::fail_reason() const {
  std::lock_guard lock(mu_);
  return fail_reason_;
}

FloodDetail Connection::flood_detail() const {
  std::lock_guard lock(mu_);
  return flood_detail_;
}

ConnectionStats Connection::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

void Connection::fail_flood(FloodDetail detail) {
  std::lock_guard lock(mu_);
  if (state_ == ConnState::kRunning) {
    state_ = ConnState::kFailed;
    fail_reason_ = FailReason::kFlood;
    flood_detail_ = detail;
  }
  inbox_cv_.notify_all();
}

void Connection::ingest_line(std::string line) {
  // Rate limit: a token bucket refilled at max_messages_per_sec with burst
  // capacity of the same size. A burst beyond the capacity trips the guard
  // regardless of wall-clock jitter.
  {
    std::unique_lock lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    const double elapsed =
        std::chrono::duration<double>(now - last_refill_).count();
    last_refill_ = now;
    const double cap = static_cast<double>(limits_.max_messages_per_sec);
    tokens_ = std::min(cap, tokens_ + elapsed * cap);
    if (tokens_ < 1.0) {
      lock.unlock();
      fail_flood(FloodDetail::kRateExceeded);
      return;
    }
    tokens_ -= 1.0;
  }

  DecodeOutcome outcome = decode_line(line, limits_.max_line_bytes);
  std::unique_lock lock(mu_);
  if (state_ != ConnState::kRunning) return;
  if (!decode_ok(outcome)) {
    if (std::get<DecodeFailure>(outcome).code ==
        DecodeFailure::Code::kOversize) {
      // A complete line over the limit is the same attack as a partial one.
      lock.unlock();
      fail_flood(FloodDetail::kOversizeLine);
      return;
    }
    // Malformed inbound data is counted and dropped; the connection survives.
    ++stats_.decode_errors;
    return;
  }
  if (inbox_.size() >= limits_.inbox_depth) {
    lock.unlock();
    fail_flood(FloodDetail::kQueueOverflow);
    return;
  }
  RpcMessage m = std::get<RpcMessage>(std::move(outcome));
  ++stats_.messages_in;
  if (m.is_notification()) ++stats_.notifications_in;
  inbox_bytes_ += line.size();
  inbox_line_sizes_.push_back(line.size());
  inbox_.push_back(std::move(m));
  stats_.peak_inbox_depth = std::max(stats_.peak_inbox_depth, inbox_.size());
  stats_.peak_buffered_bytes =
      std::max(stats_.peak_buffered_bytes, inbox_bytes_);
  lock.unlock();
  inbox_cv_.notify_one();
}

void Connection::reader_loop() {
  std::string partial;
  char buf[65536];

  for (;;) {
    {
      std::lock_guard lock(mu_);
      if (stop_requested_ || state_ != ConnState::kRunning) return;
    }
    struct pollfd fds[2];
    fds[0] = {read_fd_, POLLIN, 0};
    fds[1] = {wake_pipe_[0], POLLIN, 0};
    const int pr = ::poll(fds, 2, 1000);
    if (pr < 0) {
      if (errno == EINTR) continue;
      std::lock_guard lock(mu_);
      if (state_ == ConnState::kRunning) {
        state_ = ConnState::kFailed;
        fail_reason_ = FailReason::kIo;
      }
      inbox_cv_.notify_all();
      return;
    }
    if (fds[1].revents) return;  // shutdown requested
    if (!(fds[0].revents & (POLLIN | POLLHUP | POLLERR))) continue;

    const ssize_t n = ::read(read_fd_, buf, sizeof(buf));
    if (n == 0) {
      std::lock_guard lock(mu_);
      if (state_ == ConnState::kRunning) state_ = ConnState::kClosed;
      inbox_cv_.notify_all();
      return;
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      std::lock_guard lock(mu_);
      if (state_ == ConnState::kRunning) {
        state_ = ConnState::kFailed;
        fail_reason_ = FailReason::kIo;
      }
      inbox_cv_.notify_all();
      return;
    }

    std::size_t start = 0;
    for (ssize_t i = 0; i < n; ++i) {
      if (buf[i] != '\n') continue;
      partial.append(buf + start, static_cast<std::size_t>(i) - start);
      start = static_cast<std::size_t>(i) + 1;
      std::string line;
      line.swap(partial);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      ingest_line(std::move(line));
      {
        std::lock_guard lock(mu_);
        if (state_ != ConnState::kRunning) return;
      }
    }
    if (start < static_cast<std::size_t>(n)) {
      partial.append(buf + start, static_cast<std::size_t>(n) - start);
      {
        std::lock_guard lock(mu_);
        stats_.peak_buffered_bytes =
            std::max(stats_.peak_buffered_bytes, inbox_bytes_ + partial.size());
      }
      if (partial.size() > limits_.max_line_bytes) {
        // The line already exceeds the limit; fail without buffering the rest.
        partial.clear();
        partial.shrink_to_fit();
        fail_flood(FloodDetail::kOversizeLine);
        return;
      }
    }
  }
}

}  // namespace mcpforge::rpc
