// Manifest interpreter: loads one ServerManifest and behaves as that
// MCP server, over stdio or HTTP.  Effects run at their declared
// lifecycle points: init effects inside initialize (before the response
// is sent), tool/resource/prompt effects on each invocation.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "mcpforge/rpc/limits.hpp"
#include "mcpforge/rpc/message.hpp"
#include "mcpforge/server/effects_exec.hpp"
#include "mcpforge/server/manifest.hpp"

namespace mcpforge::server {

struct RuntimeOptions {
  std::filesystem::path sandbox_root;
  std::string sink_url;  // "" = no sink
  std::string trial_id;
  std::chrono::milliseconds interaction_timeout{5000};
  rpc::TransportLimits limits{};
};

// Strict argument validation shared by tools, prompts, and resource
// templates: unknown parameters are rejected, required ones enforced,
// declared types checked.  Empty optional means the arguments are valid.
std::optional<std::string> validate_arguments(const Json& schema,
                                              const Json& args);

// Matches `uri` against a "{param}"-style template; on success fills
// `params_out` with the captured (non-empty) segment values.
bool match_uri_template(const std::string& pattern, const std::string& uri,
                        Json& params_out);

// "{{name}}" placeholder substitution used by tool output templates and
// prompt messages ("{name}" single-brace form is used by resource bodies).
std::string substitute_placeholders(std::string text, const Json& args,
                                    bool double_brace);

class ServerRuntime {
 public:
  ServerRuntime(ServerManifest manifest, RuntimeOptions options);

  // Core dispatch for one client->server request.  Transport-free: the
  // ClientPort carries notifications and server->client requests.
  rpc::RpcMessage handle_request(const rpc::RpcMessage& request,
                                 ClientPort& client);

  // Client->server notifications carry no behavior for this dialect.
  void handle_notification(const rpc::RpcMessage&) {}

  // Blocking serve loops.  Return a process exit code.
  int run_stdio();
  int run_http(const std::string& host, int port);

  const ServerManifest& manifest() const { return manifest_; }
  EffectEngine& effects() { return effects_; }
  std::uint64_t tool_calls_seen() const { return tool_calls_; }
  bool rug_pull_swapped() const { return swapped_; }

 private:
  rpc::RpcMessage handle_initialize(const rpc::RpcMessage& req,
                                    ClientPort& client);
  rpc::RpcMessage handle_tools_list(const rpc::RpcMessage& req);
  rpc::RpcMessage handle_tools_call(const rpc::RpcMessage& req,
                                    ClientPort& client);
  rpc::RpcMessage handle_resources_list(const rpc::RpcMessage& req);
  rpc::RpcMessage handle_resources_read(const rpc::RpcMessage& req,
                                        ClientPort& client);
  rpc::RpcMessage handle_prompts_list(const rpc::RpcMessage& req);
  rpc::RpcMessage handle_prompts_get(const rpc::RpcMessage& req,
                                     ClientPort& client);
  rpc::RpcMessage handle_completion(const rpc::RpcMessage& req);

  std::string tool_description(const ToolSpec& tool) const;
  void note_tool_call(ClientPort& client);

  ServerManifest manifest_;
  RuntimeOptions options_;
  EffectEngine effects_;
  std::uint64_t tool_calls_ = 0;
  bool swapped_ = false;
  std::map<std::string, std::size_t> reads_by_uri_;
};

}  // namespace mcpforge::server
