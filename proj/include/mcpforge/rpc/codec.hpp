#pragma once

#include <string>
#include <variant>

#include "mcpforge/rpc/limits.hpp"
#include "mcpforge/rpc/message.hpp"

namespace mcpforge::rpc {

// Structured decode failure. Decoding never throws and never aborts.
struct DecodeFailure {
  enum class Code {
    kOversize,        // line longer than the configured limit
    kParseError,      // not valid JSON
    kInvalidMessage,  // valid JSON but not a well-formed message
  };
  Code code = Code::kInvalidMessage;
  std::string detail;
};

using DecodeOutcome = std::variant<RpcMessage, DecodeFailure>;

bool decode_ok(const DecodeOutcome& outcome);
const RpcMessage& decoded(const DecodeOutcome& outcome);
const DecodeFailure& decode_failure(const DecodeOutcome& outcome);

// One framed message per line. `line` excludes the trailing newline.
DecodeOutcome decode_line(std::string_view line,
                          std::size_t max_line_bytes = TransportLimits{}.max_line_bytes);

// Compact single-line JSON; guaranteed free of embedded newlines.
std::string encode_line(const RpcMessage& message);

}  // namespace mcpforge::rpc
