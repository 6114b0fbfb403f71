// Effect execution: the one place where a manifest's declared effects
// become observable behavior.  Confinement is enforced here a second
// time (the manifest validator is the first): filesystem writes stay
// under the sandbox root, sockets stay on loopback, floods and burns
// respect the hard caps.
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcpforge/attack/effect.hpp"
#include "mcpforge/rpc/message.hpp"
#include "mcpforge/sink/client.hpp"

namespace mcpforge::server {

using Json = nlohmann::json;

// The runtime's view of the connected client, as far as effects are
// concerned.  The stdio transport offers the full duplex surface; HTTP
// and standalone runs degrade (notifications dropped, interactive
// requests unanswered).
class ClientPort {
 public:
  virtual ~ClientPort() = default;

  // Fire-and-forget notification toward the client.
  virtual bool send_notification(const std::string& method, Json params) = 0;

  // Server->client request (elicitation/create, sampling/createMessage).
  // Empty on timeout, refusal-by-transport, or closed connection.
  virtual std::optional<rpc::RpcMessage> request(
      const std::string& method, Json params,
      std::chrono::milliseconds timeout) = 0;
};

// A ClientPort with no client behind it: notifications vanish, requests
// time out immediately.  Used by the HTTP transport and direct tests.
class NullClientPort final : public ClientPort {
 public:
  bool send_notification(const std::string&, Json) override { return false; }
  std::optional<rpc::RpcMessage> request(const std::string&, Json,
                                         std::chrono::milliseconds) override {
    return std::nullopt;
  }
};

// What executing an effect list contributes to the pending reply.
struct EffectOutcome {
  // OversizedOutput: pad the reply to roughly this many bytes.
  std::uint64_t pad_reply_bytes = 0;
  // ResourceInvoke: resource links to embed in the reply content.
  std::vector<std::string> resource_links;
  // Cap violations and degraded-mode notes; execution continues past them.
  std::vector<std::string> errors;
};

// Executes effect lists for one running server.  Holds the state that
// outlives a single invocation: the sink client and any listeners bound
// by EndpointBind (kept open for the server's lifetime).
class EffectEngine {
 public:
  struct Options {
    std::filesystem::path sandbox_root;
    std::string sink_url;  // "" = run without a sink
    std::string trial_id;
    std::string source;  // serving manifest's metadata.name
    std::chrono::milliseconds interaction_timeout{5000};
  };

  // What the current invocation captured (tools/call arguments,
  // resolved resource parameters, or prompts/get arguments).
  struct Invocation {
    Json args = Json::object();
    attack::ExfilSelector selector = attack::ExfilSelector::kFixedBlob;
    ClientPort* client = nullptr;  // null behaves like NullClientPort
  };

  explicit EffectEngine(Options options);
  ~EffectEngine();
  EffectEngine(const EffectEngine&) = delete;
  EffectEngine& operator=(const EffectEngine&) = delete;

  EffectOutcome run(const std::vector<attack::Effect>& effects,
                    const Invocation& invocation);

  // Ports of listeners opened by EndpointBind, in bind order.
  std::vector<int> bound_ports() const;

  // Null when no sink URL was configured or the URL was refused.
  sink::SinkClient* sink() { return sink_ ? sink_.get() : nullptr; }
  const Options& options() const { return options_; }

 private:
  struct BoundListener;

  void apply(const attack::SinkExfil& e, const Invocation& inv,
             EffectOutcome& out);
  void apply(const attack::SandboxWrite& e, EffectOutcome& out);
  void apply(const attack::MessageFlood& e, const Invocation& inv,
             EffectOutcome& out);
  void apply(const attack::OversizedOutput& e, EffectOutcome& out);
  void apply(const attack::ElicitationRequest& e, const Invocation& inv,
             EffectOutcome& out);
  void apply(const attack::SamplingRequest& e, const Invocation& inv,
             EffectOutcome& out);
  void apply(const attack::ResourceInvoke& e, EffectOutcome& out);
  void apply(const attack::EndpointBind& e, EffectOutcome& out);
  void apply(const attack::CpuBurn& e, EffectOutcome& out);

  void post_to_sink(const std::string& tag, const std::string& body);

  Options options_;
  std::unique_ptr<sink::SinkClient> sink_;
  std::vector<std::unique_ptr<BoundListener>> listeners_;
};

}  // namespace mcpforge::server
