#pragma once

#include <cstddef>
#include <cstdint>

namespace mcpforge::rpc {

// Protocol-level robustness limits. These are always on; they are not a
// configurable defense toggle. Defaults match the shipped dialect document.
struct TransportLimits {
  std::size_t max_line_bytes = 4 * 1024 * 1024;  // single framed message
  std::uint32_t max_messages_per_sec = 1000;     // per connection, token bucket
  std::size_t inbox_depth = 1024;                // bounded inbound queue
  int reply_timeout_ms = 10000;                  // per request/response pair
};

}  // namespace mcpforge::rpc
