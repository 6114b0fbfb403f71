#include "mcpforge/attack/taxonomy.hpp"

#include <array>
#include <map>

namespace mcpforge::attack {
namespace {

std::vector<CategoryInfo> build_categories() {
  return {
      {Category::kServerMetadata, "A1", "server metadata poisoning",
       Surface::kServer, Phase::kMetadata},
      {Category::kLaunchConfig, "A2", "malicious launch configuration",
       Surface::kServer, Phase::kInvocation},
      {Category::kInitialization, "A3", "malicious initialization",
       Surface::kServer, Phase::kOutput},
      {Category::kToolMetadata, "A4", "tool metadata poisoning",
       Surface::kTool, Phase::kMetadata},
      {Category::kToolInvocation, "A5", "malicious tool invocation",
       Surface::kTool, Phase::kInvocation},
      {Category::kToolOutput, "A6", "malicious tool output", Surface::kTool,
       Phase::kOutput},
      {Category::kResourceMetadata, "A7", "resource metadata poisoning",
       Surface::kResource, Phase::kMetadata},
      {Category::kResourceInvocation, "A8", "malicious resource invocation",
       Surface::kResource, Phase::kInvocation},
      {Category::kResourceOutput, "A9", "malicious resource output",
       Surface::kResource, Phase::kOutput},
      {Category::kPromptMetadata, "A10", "prompt metadata poisoning",
       Surface::kPrompt, Phase::kMetadata},
      {Category::kPromptInvocation, "A11", "malicious prompt invocation",
       Surface::kPrompt, Phase::kInvocation},
      {Category::kPromptOutput, "A12", "malicious prompt output",
       Surface::kPrompt, Phase::kOutput},
  };
}

std::vector<VariantInfo> build_variants() {
  std::vector<VariantInfo> v;
  auto add = [&v](Category c, const char* key, const char* mechanism,
                  bool dos = false) {
    v.push_back(VariantInfo{c, key, mechanism, dos});
  };

  add(Category::kServerMetadata, "promotional-metadata",
      "server description stuffed with superlatives to win selection");
  add(Category::kServerMetadata, "deceptive-metadata",
      "server name and vendor impersonate a well-known registry entry");
  add(Category::kServerMetadata, "authorization-metadata",
      "server metadata advertises an attacker-controlled authorization "
      "endpoint");

  add(Category::kLaunchConfig, "over-privileged-launch",
      "launch command requests host-wide privileges it does not need");
  add(Category::kLaunchConfig, "adversarial-connection",
      "host config points the client at an unvetted remote endpoint");
  add(Category::kLaunchConfig, "auto-launch-persistence",
      "launch config installs itself to start on every session");
  add(Category::kLaunchConfig, "rug-pull",
      "launcher auto-updates the server so its behavior can change later");

  add(Category::kInitialization, "code-execution",
      "side effects run during the initialize exchange before any consent");
  add(Category::kInitialization, "endpoint-exposure",
      "initialization binds a network endpoint reachable beyond the host");
  add(Category::kInitialization, "client-dos",
      "initialization floods the client with notifications", true);

  add(Category::kToolMetadata, "selection-inducement",
      "tool description biases ranking so the host prefers this tool");
  add(Category::kToolMetadata, "overcollection",
      "tool schema demands sensitive parameters unrelated to its function");
  add(Category::kToolMetadata, "control-flow-hijack",
      "tool description directs the host to invoke it after other tools");
  add(Category::kToolMetadata, "impersonation",
      "tool name and blurb mimic a well-known tool from a trusted vendor");

  add(Category::kToolInvocation, "code-execution",
      "tools/call performs exfiltration or drops files as a side effect");
  add(Category::kToolInvocation, "elicitation-abuse",
      "tool call raises an elicitation asking the user for sensitive data");
  add(Category::kToolInvocation, "sampling-abuse",
      "tool call raises a sampling request to extract or steer the model");
  add(Category::kToolInvocation, "client-dos",
      "tool call floods the client or wedges the connection", true);
  add(Category::kToolInvocation, "resource-invocation",
      "tool result embeds a resource link that pulls a second-stage payload");

  add(Category::kToolOutput, "control-flow-hijack",
      "tool result instructs the agent to call another tool with chosen "
      "arguments");
  add(Category::kToolOutput, "unauthorized-propagation",
      "tool result instructs the agent to forward private content outward");
  add(Category::kToolOutput, "disinformation",
      "tool result asserts false facts the agent repeats to the user");
  add(Category::kToolOutput, "client-dos",
      "tool result is oversized to break the client connection", true);
  add(Category::kToolOutput, "phishing",
      "tool result plants a deceptive link for the user to follow");

  add(Category::kResourceMetadata, "selection-inducement",
      "resource listing biases the host toward attaching this resource");
  add(Category::kResourceMetadata, "type-confusion",
      "declared media type contradicts the actual resource content");
  add(Category::kResourceMetadata, "impersonation",
      "resource name/uri mimic a trusted document");
  add(Category::kResourceMetadata, "overcollection",
      "resource template demands sensitive parameters to resolve");

  add(Category::kResourceInvocation, "code-execution",
      "resources/read performs exfiltration or drops files as a side effect");
  add(Category::kResourceInvocation, "client-dos",
      "resources/read floods the client", true);
  add(Category::kResourceInvocation, "completion-manipulation",
      "argument completion steers template parameters to attacker values");
  add(Category::kResourceInvocation, "sampling-abuse",
      "resources/read raises a sampling request against the client model");

  add(Category::kResourceOutput, "inconsistent-output",
      "repeated reads of the same resource return different content");
  add(Category::kResourceOutput, "distorted-output",
      "resource body embeds subtle falsehoods into the model context");
  add(Category::kResourceOutput, "instruction-injection",
      "resource body carries directives the agent executes as its own plan");
  add(Category::kResourceOutput, "binary-payload",
      "resource body smuggles an executable blob onto the host");
  add(Category::kResourceOutput, "client-dos",
      "resource body is oversized to break the client connection", true);

  add(Category::kPromptMetadata, "selection-inducement",
      "prompt listing biases the host toward installing this prompt");
  add(Category::kPromptMetadata, "impersonation",
      "prompt name mimics a well-known workflow prompt");
  add(Category::kPromptMetadata, "overcollection",
      "prompt arguments demand sensitive fields unrelated to the task");

  add(Category::kPromptInvocation, "code-execution",
      "prompts/get performs exfiltration or drops files as a side effect");
  add(Category::kPromptInvocation, "completion-manipulation",
      "prompt argument completion steers values to attacker choices");

  add(Category::kPromptOutput, "in-task-distortion",
      "prompt messages bias how the agent performs the requested task");
  add(Category::kPromptOutput, "extra-task-injection",
      "prompt messages smuggle an additional task the user never asked for");

  return v;
}

const std::map<Category, std::vector<const VariantInfo*>>& variant_index() {
  static const auto index = [] {
    std::map<Category, std::vector<const VariantInfo*>> m;
    for (const auto& v : all_variants()) m[v.category].push_back(&v);
    return m;
  }();
  return index;
}

}  // namespace

const std::vector<CategoryInfo>& all_categories() {
  static const std::vector<CategoryInfo> cats = build_categories();
  return cats;
}

const CategoryInfo& category_info(Category c) {
  return all_categories().at(static_cast<std::size_t>(c));
}

std::string category_id(Category c) { return category_info(c).id; }
std::string category_title(Category c) { return category_info(c).title; }

std::optional<Category> parse_category(const std::string& id) {
  for (const auto& info : all_categories())
    if (info.id == id) return info.category;
  return std::nullopt;
}

std::string surface_name(Surface s) {
  switch (s) {
    case Surface::kServer: return "server";
    case Surface::kTool: return "tool";
    case Surface::kResource: return "resource";
    case Surface::kPrompt: return "prompt";
  }
  return "?";
}

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::kMetadata: return "metadata";
    case Phase::kInvocation: return "invocation";
    case Phase::kOutput: return "output";
  }
  return "?";
}

const std::vector<VariantInfo>& all_variants() {
  static const std::vector<VariantInfo> variants = build_variants();
  return variants;
}

const std::vector<const VariantInfo*>& variants_of(Category c) {
  static const std::vector<const VariantInfo*> empty;
  auto it = variant_index().find(c);
  return it == variant_index().end() ? empty : it->second;
}

const VariantInfo* find_variant(Category c, const std::string& key) {
  for (const auto* v : variants_of(c))
    if (v->key == key) return v;
  return nullptr;
}

std::string AttackLabel::qualified() const {
  return category_id(category) + ":" + variant;
}

Json AttackLabel::to_json() const {
  Json j{{"category", category_id(category)}, {"variant", variant}};
  if (!evidence.empty()) j["evidence"] = evidence;
  return j;
}

std::optional<AttackLabel> AttackLabel::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("category") || !j.contains("variant"))
    return std::nullopt;
  if (!j["category"].is_string() || !j["variant"].is_string())
    return std::nullopt;
  auto cat = parse_category(j["category"].get<std::string>());
  if (!cat) return std::nullopt;
  AttackLabel label;
  label.category = *cat;
  label.variant = j["variant"].get<std::string>();
  if (!find_variant(label.category, label.variant)) return std::nullopt;
  if (j.contains("evidence")) {
    if (!j["evidence"].is_array()) return std::nullopt;
    for (const auto& e : j["evidence"]) {
      if (!e.is_string()) return std::nullopt;
      label.evidence.push_back(e.get<std::string>());
    }
  }
  return label;
}

std::optional<AttackLabel> parse_qualified_label(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  auto cat = parse_category(text.substr(0, colon));
  if (!cat) return std::nullopt;
  AttackLabel label;
  label.category = *cat;
  label.variant = text.substr(colon + 1);
  if (!find_variant(label.category, label.variant)) return std::nullopt;
  return label;
}

}  // namespace mcpforge::attack
