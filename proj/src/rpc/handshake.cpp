#include "mcpforge/rpc/handshake.hpp"

#include "mcpforge/rpc/method.hpp"

namespace mcpforge::rpc {

namespace {

HandshakeOutcome failure(const Channel& channel, const std::string& step,
                         const CallOutcome& outcome) {
  HandshakeOutcome out;
  out.status = (channel.state() == ConnState::kFailed &&
                channel.fail_reason() == FailReason::kFlood)
                   ? HandshakeOutcome::Status::kFloodFailed
                   : HandshakeOutcome::Status::kFailed;
  std::string why;
  switch (outcome.status) {
    case CallOutcome::Status::kTimeout: why = "timeout"; break;
    case CallOutcome::Status::kRpcError:
      why = "rpc error: " + outcome.error.message;
      break;
    default:
      why = "connection " + std::string(conn_state_name(channel.state())) +
            "(" + std::string(fail_reason_name(channel.fail_reason())) + ")";
      break;
  }
  out.detail = step + ": " + why;
  return out;
}

// Pulls an array field out of a list result, tolerating a malformed shape.
std::vector<Json> array_field(const Json& result, const char* key,
                              std::vector<std::string>& warnings) {
  std::vector<Json> items;
  if (!result.is_object() || !result.contains(key) ||
      !result.at(key).is_array()) {
    warnings.push_back(std::string("list result missing array field: ") + key);
    return items;
  }
  for (const auto& item : result.at(key))
    if (item.is_object()) items.push_back(item);
  return items;
}

}  // namespace

HandshakeOutcome perform_handshake(Channel& channel, const Json& client_info) {
  HandshakeOutcome out;

  Json init_params{{"protocolVersion", std::string(kProtocolVersion)},
                   {"clientInfo", client_info},
                   {"capabilities",
                    Json{{"sampling", Json::object()},
                         {"elicitation", Json::object()}}}};
  CallOutcome init = channel.call(std::string(method_name(Method::kInitialize)),
                                  std::move(init_params));
  if (!init.ok()) return failure(channel, "initialize", init);
  if (init.result.is_object()) {
    if (init.result.contains("serverInfo"))
      out.snapshot.server_info = init.result.at("serverInfo");
    if (init.result.contains("capabilities"))
      out.snapshot.capabilities = init.result.at("capabilities");
    if (init.result.contains("protocolVersion") &&
        init.result.at("protocolVersion").is_string())
      out.snapshot.protocol_version =
          init.result.at("protocolVersion").get<std::string>();
  }
  if (out.snapshot.protocol_version != kProtocolVersion)
    out.snapshot.warnings.push_back("protocol version mismatch: " +
                                    out.snapshot.protocol_version);

  CallOutcome tools = channel.call(std::string(method_name(Method::kToolsList)),
                                   Json::object());
  if (!tools.ok()) return failure(channel, "tools/list", tools);
  out.snapshot.tools =
      array_field(tools.result, "tools", out.snapshot.warnings);

  CallOutcome resources = channel.call(
      std::string(method_name(Method::kResourcesList)), Json::object());
  if (!resources.ok()) return failure(channel, "resources/list", resources);
  out.snapshot.resources =
      array_field(resources.result, "resources", out.snapshot.warnings);

  CallOutcome prompts = channel.call(
      std::string(method_name(Method::kPromptsList)), Json::object());
  if (!prompts.ok()) return failure(channel, "prompts/list", prompts);
  out.snapshot.prompts =
      array_field(prompts.result, "prompts", out.snapshot.warnings);

  out.status = HandshakeOutcome::Status::kOk;
  return out;
}

}  // namespace mcpforge::rpc
