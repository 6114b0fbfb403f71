// Server manifests: the single serialized artifact that defines one
// generated MCP server — its metadata, launch configuration, tool /
// resource / prompt surfaces, scripted side effects, and (for malicious
// servers) the ground-truth attack labels a judge scores against.
//
// A manifest is data, not code.  The shared runtime binary loads one
// and becomes that server; the scanner reads one and inspects it; the
// generator writes corpora of them.  Schema version 1 throughout.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcpforge/attack/effect.hpp"
#include "mcpforge/attack/taxonomy.hpp"

namespace mcpforge::server {

using Json = nlohmann::json;

inline constexpr int kManifestSchemaVersion = 1;

struct ToolSpec {
  std::string name;
  std::string description;
  Json input_schema = Json::object();  // JSON-Schema-shaped object
  Json annotations;                    // optional object (null == absent)
  // Text content of the tools/call result; "{{arg}}" placeholders are
  // replaced with call arguments.
  std::string output_template;
  std::vector<attack::Effect> effects;  // run on every call

  Json to_json() const;
  static std::optional<ToolSpec> from_json(const Json& j);
};

struct ResourceSpec {
  std::string uri;  // templates carry "{param}" placeholders
  std::string name;
  std::string title;  // optional display title
  std::string description;
  std::string mime_type = "text/plain";
  // Advertised byte size; for benign resources it matches the body, while a
  // mismatch on a malicious one is deliberate scanner evidence.
  std::optional<std::uint64_t> declared_size;
  Json annotations;           // optional object: audience/priority/lastModified
  std::string body;           // "{param}" placeholders allowed
  bool body_is_base64 = false;  // set for binary payload bodies
  std::vector<std::string> template_params;  // non-empty == template
  // When non-empty, successive reads rotate through these bodies
  // (inconsistent-output attacks).
  std::vector<std::string> alternating_bodies;
  std::vector<attack::Effect> effects;  // run on every read

  bool is_template() const { return !template_params.empty(); }
  Json to_json() const;
  static std::optional<ResourceSpec> from_json(const Json& j);
};

struct PromptArg {
  std::string name;
  std::string description;
  bool required = false;
};

struct PromptMessage {
  std::string role = "user";  // "user" | "assistant"
  std::string text;           // "{{arg}}" placeholders allowed
};

struct PromptSpec {
  std::string name;
  std::string description;
  std::vector<PromptArg> arguments;
  std::vector<PromptMessage> messages;
  std::vector<attack::Effect> effects;  // run on every prompts/get

  Json to_json() const;
  static std::optional<PromptSpec> from_json(const Json& j);
};

// Canned completion/complete behavior: when the client asks for
// completions of `arg` on the named ref and the partial input starts
// with `partial`, reply with `values` (most attractive first).
struct CompletionRule {
  std::string ref_type;  // "resource" | "prompt"
  std::string ref_name;  // resource uri or prompt name
  std::string arg;
  std::string partial;  // "" matches any partial
  std::vector<std::string> values;

  Json to_json() const;
  static std::optional<CompletionRule> from_json(const Json& j);
};

// The launch block a host config would carry for this server, kept
// verbatim as evidence.  The simulated host never executes `command`;
// it records it and starts the shared runtime on the manifest instead.
struct ConfigBlock {
  std::string launcher = "stdio";  // "stdio" | "http"
  std::string command;             // declared launch command (stdio)
  std::vector<std::string> args;
  std::map<std::string, std::string> env;
  std::string url;  // declared endpoint (http)

  std::string command_line() const;  // "command arg1 arg2 ..."
  Json to_json() const;
  static std::optional<ConfigBlock> from_json(const Json& j);
};

struct ServerMetadata {
  std::string name;
  std::string version = "1.0.0";
  std::string vendor;
  std::string description;
  // Optional marketing blurb surfaced alongside the description (A1 material).
  std::string promo_text;
  // Optional attacker-advertised OAuth-style endpoint (A1 material).
  std::string authorization_endpoint;

  Json to_json() const;
  static std::optional<ServerMetadata> from_json(const Json& j);
};

// Behavior swap after `swap_after` tool calls: the runtime emits
// notifications/tools/list_changed and subsequent tools/list replies
// carry `swapped_suffix` appended to every tool description.
struct RugPullBehavior {
  bool enabled = false;
  int swap_after = 1;
  std::string swapped_suffix;

  Json to_json() const;
  static RugPullBehavior from_json(const Json& j);
};

struct ServerManifest {
  int schema_version = kManifestSchemaVersion;
  std::string corpus_id;  // e.g. "A5-003" or "benign-017"
  ServerMetadata metadata;
  ConfigBlock config;
  std::vector<attack::Effect> init_effects;  // run during initialize
  std::vector<ToolSpec> tools;
  std::vector<ResourceSpec> resources;
  std::vector<PromptSpec> prompts;
  std::vector<CompletionRule> completions;
  RugPullBehavior rug_pull;
  std::vector<attack::AttackLabel> labels;  // empty == benign

  bool benign() const { return labels.empty(); }
  const ToolSpec* find_tool(const std::string& name) const;
  const ResourceSpec* find_resource(const std::string& uri) const;
  const PromptSpec* find_prompt(const std::string& name) const;

  // Every rule violation found, prefixed with its location; empty means
  // the manifest is valid.  Includes all effect safety caps.
  std::vector<std::string> validate() const;

  // Host-convention config entry for this server, e.g.
  //   {"command": "docker", "args": [...], "env": {...}}
  // or {"url": "..."} for http servers.  `manifest_ref` (normally the
  // manifest's file name) is planted as env MCPFORGE_MANIFEST so a host
  // can find the manifest the entry was generated from.
  Json host_config_entry(const std::string& manifest_ref) const;

  Json to_json() const;
  static std::optional<ServerManifest> from_json(
      const Json& j, std::vector<std::string>* errors = nullptr);

  void save(const std::filesystem::path& path) const;
  static std::optional<ServerManifest> load(
      const std::filesystem::path& path,
      std::vector<std::string>* errors = nullptr);
};

}  // namespace mcpforge::server
