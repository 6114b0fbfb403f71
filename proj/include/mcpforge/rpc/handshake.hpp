#pragma once

#include <string>
#include <vector>

#include "mcpforge/rpc/channel.hpp"

namespace mcpforge::rpc {

// What the client learned about a server during the handshake: its declared
// identity plus the full metadata surface of tools, resources, and prompts.
struct ServerContextSnapshot {
  Json server_info;  // name/version/description + optional dialect extensions
  std::string protocol_version;
  Json capabilities;
  std::vector<Json> tools;
  std::vector<Json> resources;
  std::vector<Json> prompts;
  std::vector<std::string> warnings;
};

struct HandshakeOutcome {
  enum class Status { kOk, kFloodFailed, kFailed };
  Status status = Status::kFailed;
  ServerContextSnapshot snapshot;
  std::string detail;

  bool ok() const { return status == Status::kOk; }
};

// initialize -> tools/list -> resources/list -> prompts/list sweep.
// Never throws; a flooding server yields kFloodFailed with the host healthy.
HandshakeOutcome perform_handshake(Channel& channel, const Json& client_info);

}  // namespace mcpforge::rpc
