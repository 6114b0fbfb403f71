#include "mcpforge/rpc/codec.hpp"

namespace mcpforge::rpc {

bool decode_ok(const DecodeOutcome& outcome) {
  return std::holds_alternative<RpcMessage>(outcome);
}

const RpcMessage& decoded(const DecodeOutcome& outcome) {
  return std::get<RpcMessage>(outcome);
}

const DecodeFailure& decode_failure(const DecodeOutcome& outcome) {
  return std::get<DecodeFailure>(outcome);
}

namespace {

DecodeFailure invalid(std::string detail) {
  return DecodeFailure{DecodeFailure::Code::kInvalidMessage, std::move(detail)};
}

bool parse_id(const Json& j, RpcId& out) {
  if (j.is_number_integer()) {
    out = j.get<std::int64_t>();
    return true;
  }
  if (j.is_string()) {
    out = j.get<std::string>();
    return true;
  }
  return false;
}

}  // namespace

DecodeOutcome decode_line(std::string_view line, std::size_t max_line_bytes) {
  if (line.size() > max_line_bytes) {
    return DecodeFailure{DecodeFailure::Code::kOversize,
                         "line of " + std::to_string(line.size()) +
                             " bytes exceeds limit of " +
                             std::to_string(max_line_bytes)};
  }
  Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    return DecodeFailure{DecodeFailure::Code::kParseError, "invalid JSON"};
  if (!j.is_object()) return invalid("message is not a JSON object");

  const auto version = j.find("jsonrpc");
  if (version == j.end()) return invalid("missing jsonrpc field");
  if (!version->is_string() || version->get<std::string>() != "2.0")
    return invalid("jsonrpc field must be the string \"2.0\"");

  const bool has_method = j.contains("method");
  const bool has_result = j.contains("result");
  const bool has_error = j.contains("error");
  const bool has_id = j.contains("id") && !j.at("id").is_null();

  RpcMessage m;
  if (has_method) {
    if (has_result || has_error)
      return invalid("method present alongside result/error");
    if (!j.at("method").is_string()) return invalid("method must be a string");
    m.method = j.at("method").get<std::string>();
    if (j.contains("params") && !j.at("params").is_null()) {
      if (!j.at("params").is_object())
        return invalid("params must be a JSON object when present");
      m.params = j.at("params");
    }
    if (has_id) {
      if (!parse_id(j.at("id"), m.id))
        return invalid("id must be an integer or a string");
      m.kind = RpcMessage::Kind::kRequest;
    } else {
      m.kind = RpcMessage::Kind::kNotification;
    }
    return m;
  }

  // No method: must be a response.
  if (!has_id) return invalid("response without id");
  if (!parse_id(j.at("id"), m.id))
    return invalid("id must be an integer or a string");
  if (has_result == has_error)
    return invalid("response must carry exactly one of result/error");
  m.kind = RpcMessage::Kind::kResponse;
  if (has_result) {
    m.result = j.at("result");
  } else {
    const Json& e = j.at("error");
    if (!e.is_object() || !e.contains("code") || !e.contains("message") ||
        !e.at("code").is_number_integer() || !e.at("message").is_string())
      return invalid("error must be {code:int, message:string}");
    RpcError err;
    err.code = e.at("code").get<std::int64_t>();
    err.message = e.at("message").get<std::string>();
    if (e.contains("data")) err.data = e.at("data");
    m.error = std::move(err);
  }
  return m;
}

std::string encode_line(const RpcMessage& message) {
  Json j;
  j["jsonrpc"] = "2.0";
  switch (message.kind) {
    case RpcMessage::Kind::kRequest:
      j["id"] = id_to_json(message.id);
      j["method"] = message.method;
      if (message.params) j["params"] = *message.params;
      break;
    case RpcMessage::Kind::kNotification:
      j["method"] = message.method;
      if (message.params) j["params"] = *message.params;
      break;
    case RpcMessage::Kind::kResponse:
      j["id"] = id_to_json(message.id);
      if (message.error) {
        Json e;
        e["code"] = message.error->code;
        e["message"] = message.error->message;
        if (message.error->data) e["data"] = *message.error->data;
        j["error"] = e;
      } else {
        j["result"] = message.result ? *message.result : Json(nullptr);
      }
      break;
  }
  // dump() escapes control characters, so the line never embeds a newline.
  return j.dump();
}

}  // namespace mcpforge::rpc
