// Composition: turning a selection of seed-pool indices into one concrete,
// valid server manifest.
//
// Selection semantics:
//   - tool/resource/prompt indices address the combined pool (malicious
//     seeds first, then benign); they are normalized to sorted+unique.
//   - tool_indices must be non-empty; the other sections may be empty.
//   - target_category, when set, demands at least one selected malicious
//     seed and forbids malicious seeds of any other category.  When unset
//     the selection must be entirely benign.
//   - rng_seed only drives cosmetic choices (the generated server name);
//     the attack surface is a pure function of the index tuple.
//
// The composed manifest inherits the union of the selected seeds' labels,
// so a judge scoring the manifest scores exactly the seeds inside it.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcpforge/attack/seed_pool.hpp"
#include "mcpforge/attack/taxonomy.hpp"
#include "mcpforge/server/manifest.hpp"

namespace mcpforge::gen {

using Json = nlohmann::json;

struct CompositionSelection {
  std::optional<std::size_t> metadata_index;
  std::optional<std::size_t> launch_index;
  std::vector<std::size_t> init_indices;
  std::vector<std::size_t> tool_indices;
  std::vector<std::size_t> resource_indices;
  std::vector<std::size_t> prompt_indices;
  std::uint64_t rng_seed = 0;
  std::optional<attack::Category> target_category;
  std::string corpus_id;

  // Sorts and dedups the index lists.
  void normalize();

  // Structural fingerprint used for corpus distinctness.  Excludes
  // rng_seed and corpus_id: two selections that differ only cosmetically
  // are the same composition.
  std::string canonical_key() const;

  Json to_json() const;
  static std::optional<CompositionSelection> from_json(const Json& j);
};

struct ComposeResult {
  std::optional<server::ServerManifest> manifest;
  std::vector<std::string> errors;

  bool ok() const { return manifest.has_value(); }
};

ComposeResult compose(const attack::SeedPool& pool,
                      const CompositionSelection& selection);

// The deterministic name drawn for `rng_seed` (exposed for tests; this is
// what compose() uses when no metadata seed overrides the name).
std::string generated_server_name(std::uint64_t rng_seed);

}  // namespace mcpforge::gen
