// The seed pool: typed building blocks the generator composes into
// server manifests.
//
// Each *malicious* seed carries the ground-truth labels (one taxonomy
// category per seed) plus everything needed to make those labels live at
// runtime — the spec itself, companion tools/resources the attack chains
// through, and completion rules.  *Benign* seeds carry no labels and, by
// invariant, no effects anywhere (spec, companions, nothing).
//
// Family → category mapping is fixed:
//   metadata seeds  → A1    launch seeds → A2      init seeds   → A3
//   tool seeds      → A4-A6 resource seeds → A7-A9 prompt seeds → A10-A12
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcpforge/attack/effect.hpp"
#include "mcpforge/attack/taxonomy.hpp"
#include "mcpforge/server/manifest.hpp"

namespace mcpforge::attack {

struct MetadataSeed {
  std::string id;
  // Non-empty metadata fields override the composer's generated defaults;
  // a non-empty name is how impersonation seeds pin their lookalike name.
  server::ServerMetadata metadata;
  std::vector<AttackLabel> labels;
  std::vector<server::ToolSpec> companion_tools;

  Json to_json() const;
  static std::optional<MetadataSeed> from_json(const Json& j,
                                               std::string* error = nullptr);
};

struct LaunchSeed {
  std::string id;
  server::ConfigBlock config;
  server::RugPullBehavior rug_pull;
  std::vector<AttackLabel> labels;

  Json to_json() const;
  static std::optional<LaunchSeed> from_json(const Json& j,
                                             std::string* error = nullptr);
};

struct InitSeed {
  std::string id;
  std::vector<Effect> effects;
  std::vector<AttackLabel> labels;

  Json to_json() const;
  static std::optional<InitSeed> from_json(const Json& j,
                                           std::string* error = nullptr);
};

struct ToolSeed {
  std::string id;
  server::ToolSpec tool;
  std::vector<AttackLabel> labels;  // empty == benign
  std::vector<server::ToolSpec> companion_tools;
  std::vector<server::ResourceSpec> companion_resources;
  std::vector<server::CompletionRule> completions;

  Json to_json() const;
  static std::optional<ToolSeed> from_json(const Json& j,
                                           std::string* error = nullptr);
};

struct ResourceSeed {
  std::string id;
  server::ResourceSpec resource;
  std::vector<AttackLabel> labels;
  std::vector<server::ToolSpec> companion_tools;
  std::vector<server::CompletionRule> completions;

  Json to_json() const;
  static std::optional<ResourceSeed> from_json(const Json& j,
                                               std::string* error = nullptr);
};

struct PromptSeed {
  std::string id;
  server::PromptSpec prompt;
  std::vector<AttackLabel> labels;
  std::vector<server::ToolSpec> companion_tools;
  std::vector<server::CompletionRule> completions;

  Json to_json() const;
  static std::optional<PromptSeed> from_json(const Json& j,
                                             std::string* error = nullptr);
};

// Shipped pool shape (exact counts the default fixtures must match).
struct PoolCounts {
  std::size_t metadata = 0;
  std::size_t launch = 0;
  std::size_t init = 0;
  std::size_t tools_malicious = 0;
  std::size_t tools_benign = 0;
  std::size_t resources_malicious = 0;
  std::size_t resources_benign = 0;
  std::size_t prompts_malicious = 0;
  std::size_t prompts_benign = 0;
};
inline constexpr PoolCounts kShippedPoolCounts{3, 5, 7, 10, 30, 10, 10, 5, 5};

class SeedPool {
 public:
  std::vector<MetadataSeed> metadata_seeds;
  std::vector<LaunchSeed> launch_seeds;
  std::vector<InitSeed> init_seeds;
  std::vector<ToolSeed> tools_malicious;
  std::vector<ToolSeed> tools_benign;
  std::vector<ResourceSeed> resources_malicious;
  std::vector<ResourceSeed> resources_benign;
  std::vector<PromptSeed> prompts_malicious;
  std::vector<PromptSeed> prompts_benign;

  // Combined index spaces (malicious first, then benign) used by
  // composition selections.
  std::size_t tool_count() const {
    return tools_malicious.size() + tools_benign.size();
  }
  std::size_t resource_count() const {
    return resources_malicious.size() + resources_benign.size();
  }
  std::size_t prompt_count() const {
    return prompts_malicious.size() + prompts_benign.size();
  }
  const ToolSeed& tool_at(std::size_t i) const;
  const ResourceSeed& resource_at(std::size_t i) const;
  const PromptSeed& prompt_at(std::size_t i) const;

  // Combined indices of the malicious seeds carrying `category` within
  // the matching family (tools for A4-A6, resources for A7-A9, prompts
  // for A10-A12; metadata/launch/init indices for A1/A2/A3).
  std::vector<std::size_t> seeds_of(Category category) const;

  PoolCounts counts() const;

  // Structural violations: id uniqueness, label/family consistency,
  // benign seeds carrying effects, specs that fail manifest validation.
  // Empty == sound pool.  Does not pin counts.
  std::vector<std::string> validate() const;

  // Deviations from kShippedPoolCounts and from the per-category seed
  // allocation the corpus generator relies on.
  std::vector<std::string> validate_shipped_shape() const;

  // Loads metadata/launch/init/tools/resources/prompts .json from `dir`.
  static std::optional<SeedPool> load(const std::filesystem::path& dir,
                                      std::vector<std::string>* errors);
};

}  // namespace mcpforge::attack
