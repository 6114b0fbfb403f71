#include "mcpforge/rpc/message.hpp"

namespace mcpforge::rpc {

bool id_present(const RpcId& id) {
  return !std::holds_alternative<std::monostate>(id);
}

Json id_to_json(const RpcId& id) {
  if (const auto* n = std::get_if<std::int64_t>(&id)) return *n;
  if (const auto* s = std::get_if<std::string>(&id)) return *s;
  return nullptr;
}

std::string id_to_string(const RpcId& id) {
  if (const auto* n = std::get_if<std::int64_t>(&id)) return std::to_string(*n);
  if (const auto* s = std::get_if<std::string>(&id)) return *s;
  return "<none>";
}

bool RpcError::operator==(const RpcError& other) const {
  return code == other.code && message == other.message && data == other.data;
}

bool RpcMessage::operator==(const RpcMessage& other) const {
  return kind == other.kind && id == other.id && method == other.method &&
         params == other.params && result == other.result &&
         error == other.error;
}

RpcMessage make_request(RpcId id, std::string method, Json params) {
  RpcMessage m;
  m.kind = RpcMessage::Kind::kRequest;
  m.id = std::move(id);
  m.method = std::move(method);
  m.params = std::move(params);
  return m;
}

RpcMessage make_request(RpcId id, std::string method) {
  RpcMessage m;
  m.kind = RpcMessage::Kind::kRequest;
  m.id = std::move(id);
  m.method = std::move(method);
  return m;
}

RpcMessage make_notification(std::string method, Json params) {
  RpcMessage m;
  m.kind = RpcMessage::Kind::kNotification;
  m.method = std::move(method);
  m.params = std::move(params);
  return m;
}

RpcMessage make_result(RpcId id, Json result) {
  RpcMessage m;
  m.kind = RpcMessage::Kind::kResponse;
  m.id = std::move(id);
  m.result = std::move(result);
  return m;
}

RpcMessage make_error(RpcId id, std::int64_t code, std::string message) {
  RpcMessage m;
  m.kind = RpcMessage::Kind::kResponse;
  m.id = std::move(id);
  m.error = RpcError{code, std::move(message), std::nullopt};
  return m;
}

RpcMessage make_error(RpcId id, std::int64_t code, std::string message,
                      Json data) {
  RpcMessage m;
  m.kind = RpcMessage::Kind::kResponse;
  m.id = std::move(id);
  m.error = RpcError{code, std::move(message), std::move(data)};
  return m;
}

}  // namespace mcpforge::rpc
