#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace mcpforge::rpc {

using Json = nlohmann::json;

// Request/response correlation id: an integer or a string. Notifications have
// no id (monostate).
using RpcId = std::variant<std::monostate, std::int64_t, std::string>;

bool id_present(const RpcId& id);
Json id_to_json(const RpcId& id);
std::string id_to_string(const RpcId& id);

struct RpcError {
  std::int64_t code = 0;
  std::string message;
  std::optional<Json> data;

  bool operator==(const RpcError&) const;
};

// Standard JSON-RPC error codes plus the dialect's application range.
inline constexpr std::int64_t kParseError = -32700;
inline constexpr std::int64_t kInvalidRequest = -32600;
inline constexpr std::int64_t kMethodNotFound = -32601;
inline constexpr std::int64_t kInvalidParams = -32602;
inline constexpr std::int64_t kInternalError = -32603;
inline constexpr std::int64_t kInteractionTimeout = -32001;

struct RpcMessage {
  enum class Kind { kRequest, kNotification, kResponse };

  Kind kind = Kind::kNotification;
  RpcId id;                         // requests + responses
  std::string method;               // requests + notifications, verbatim
  std::optional<Json> params;       // requests + notifications
  std::optional<Json> result;       // responses (exactly one of result/error)
  std::optional<RpcError> error;

  bool is_request() const { return kind == Kind::kRequest; }
  bool is_notification() const { return kind == Kind::kNotification; }
  bool is_response() const { return kind == Kind::kResponse; }

  bool operator==(const RpcMessage&) const;
};

RpcMessage make_request(RpcId id, std::string method, Json params);
RpcMessage make_request(RpcId id, std::string method);
RpcMessage make_notification(std::string method, Json params);
RpcMessage make_result(RpcId id, Json result);
RpcMessage make_error(RpcId id, std::int64_t code, std::string message);
RpcMessage make_error(RpcId id, std::int64_t code, std::string message,
                      Json data);

}  // namespace mcpforge::rpc
