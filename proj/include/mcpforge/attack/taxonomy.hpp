// Attack taxonomy: twelve categories laid out as a 4x3 grid of
// surface (server, tool, resource, prompt) x phase (metadata/config,
// invocation, output), with named variants under each category.
//
// Category ids A1..A12 and the variant keys below are the stable public
// vocabulary of the whole testbed: manifests carry them as labels,
// judges are registered under them, the generator allocates seeds by
// them, and reports aggregate over them.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mcpforge::attack {

using Json = nlohmann::json;

enum class Category : std::uint8_t {
  kServerMetadata,      // A1: poisoned server name/description/authorization
  kLaunchConfig,        // A2: malicious host launch configuration
  kInitialization,      // A3: malicious behavior during the init exchange
  kToolMetadata,        // A4: poisoned tool names/descriptions/schemas
  kToolInvocation,      // A5: malicious side effects of tools/call
  kToolOutput,          // A6: malicious content in tool results
  kResourceMetadata,    // A7: poisoned resource listings/templates
  kResourceInvocation,  // A8: malicious side effects of resources/read
  kResourceOutput,      // A9: malicious content in resource bodies
  kPromptMetadata,      // A10: poisoned prompt listings/arguments
  kPromptInvocation,    // A11: malicious side effects of prompts/get
  kPromptOutput,        // A12: malicious content in prompt messages
};

inline constexpr int kCategoryCount = 12;

enum class Surface : std::uint8_t { kServer, kTool, kResource, kPrompt };
enum class Phase : std::uint8_t { kMetadata, kInvocation, kOutput };

struct CategoryInfo {
  Category category;
  std::string id;     // "A1".."A12"
  std::string title;  // short human name
  Surface surface;
  Phase phase;
};

const std::vector<CategoryInfo>& all_categories();
const CategoryInfo& category_info(Category c);
std::string category_id(Category c);
std::string category_title(Category c);
std::optional<Category> parse_category(const std::string& id);
std::string surface_name(Surface s);
std::string phase_name(Phase p);

// One concrete attack pattern within a category.  `client_dos` marks
// variants whose intended effect is to disrupt the client connection;
// the harness treats a flood-failed connection as the expected outcome
// for those and as a defect for everything else.
struct VariantInfo {
  Category category;
  std::string key;        // e.g. "control-flow-hijack"
  std::string mechanism;  // one-line description of how it works
  bool client_dos = false;
};

const std::vector<VariantInfo>& all_variants();
const std::vector<const VariantInfo*>& variants_of(Category c);
const VariantInfo* find_variant(Category c, const std::string& key);

// Label attached to a generated manifest: the ground truth a judge
// scores against.  `evidence` carries variant-specific strings the
// judge looks for (marker phrases, expected completion values, ...).
struct AttackLabel {
  Category category;
  std::string variant;
  std::vector<std::string> evidence;

  std::string qualified() const;  // "A6:control-flow-hijack"
  Json to_json() const;
  static std::optional<AttackLabel> from_json(const Json& j);

  bool operator==(const AttackLabel& other) const = default;
};

std::optional<AttackLabel> parse_qualified_label(const std::string& text);

}  // namespace mcpforge::attack
