#include "mcpforge/gen/composer.hpp"

#include <algorithm>
#include <set>

#include "mcpforge/util/rng.hpp"

namespace mcpforge::gen {

namespace {

using attack::AttackLabel;
using attack::Category;
using attack::SeedPool;
using server::ServerManifest;

constexpr const char* kNameAdjectives[] = {
    "amber",  "basalt", "cedar",  "delta",  "ember",  "fjord",
    "garnet", "harbor", "indigo", "juniper", "kestrel", "lumen",
    "mesa",   "nimbus", "onyx",   "quartz",
};
constexpr const char* kNameNouns[] = {
    "anchor", "beacon", "compass", "drift",  "ridge",  "falcon",
    "grove",  "heron",  "island",  "lantern", "meadow", "otter",
    "pines",  "quill",  "river",   "summit",
};

std::string join_indices(const std::vector<std::size_t>& v) {
  if (v.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

Json indices_to_json(const std::vector<std::size_t>& v) {
  Json arr = Json::array();
  for (auto i : v) arr.push_back(i);
  return arr;
}

bool indices_from_json(const Json& j, const char* key,
                       std::vector<std::size_t>& out) {
  if (!j.contains(key)) return true;
  if (!j[key].is_array()) return false;
  for (const auto& entry : j[key]) {
    if (!entry.is_number_unsigned()) return false;
    out.push_back(entry.get<std::size_t>());
  }
  return true;
}

void append_label_union(std::vector<AttackLabel>& labels,
                        const std::vector<AttackLabel>& more) {
  for (const auto& label : more) {
    const bool seen = std::any_of(
        labels.begin(), labels.end(), [&](const AttackLabel& l) {
          return l.category == label.category && l.variant == label.variant &&
                 l.evidence == label.evidence;
        });
    if (!seen) labels.push_back(label);
  }
}

void apply_metadata_seed(const attack::MetadataSeed& seed,
                         ServerManifest& m) {
  if (!seed.metadata.name.empty()) m.metadata.name = seed.metadata.name;
  if (!seed.metadata.version.empty()) m.metadata.version = seed.metadata.version;
  if (!seed.metadata.vendor.empty()) m.metadata.vendor = seed.metadata.vendor;
  if (!seed.metadata.description.empty())
    m.metadata.description = seed.metadata.description;
  if (!seed.metadata.promo_text.empty())
    m.metadata.promo_text = seed.metadata.promo_text;
  if (!seed.metadata.authorization_endpoint.empty())
    m.metadata.authorization_endpoint = seed.metadata.authorization_endpoint;
}

}  // namespace

void CompositionSelection::normalize() {
  auto tidy = [](std::vector<std::size_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  tidy(init_indices);
  tidy(tool_indices);
  tidy(resource_indices);
  tidy(prompt_indices);
}

std::string CompositionSelection::canonical_key() const {
  CompositionSelection copy = *this;
  copy.normalize();
  std::string key;
  key += "m:";
  key += metadata_index ? std::to_string(*metadata_index) : "-";
  key += "|l:";
  key += launch_index ? std::to_string(*launch_index) : "-";
  key += "|i:" + join_indices(copy.init_indices);
  key += "|t:" + join_indices(copy.tool_indices);
  key += "|r:" + join_indices(copy.resource_indices);
  key += "|p:" + join_indices(copy.prompt_indices);
  return key;
}

Json CompositionSelection::to_json() const {
  Json j = Json::object();
  if (metadata_index) j["metadata_index"] = *metadata_index;
  if (launch_index) j["launch_index"] = *launch_index;
  if (!init_indices.empty()) j["init_indices"] = indices_to_json(init_indices);
  j["tool_indices"] = indices_to_json(tool_indices);
  if (!resource_indices.empty())
    j["resource_indices"] = indices_to_json(resource_indices);
  if (!prompt_indices.empty())
    j["prompt_indices"] = indices_to_json(prompt_indices);
  j["rng_seed"] = rng_seed;
  if (target_category) j["target_category"] = category_id(*target_category);
  if (!corpus_id.empty()) j["corpus_id"] = corpus_id;
  return j;
}

std::optional<CompositionSelection> CompositionSelection::from_json(
    const Json& j) {
  if (!j.is_object()) return std::nullopt;
  CompositionSelection s;
  if (j.contains("metadata_index")) {
    if (!j["metadata_index"].is_number_unsigned()) return std::nullopt;
    s.metadata_index = j["metadata_index"].get<std::size_t>();
  }
  if (j.contains("launch_index")) {
    if (!j["launch_index"].is_number_unsigned()) return std::nullopt;
    s.launch_index = j["launch_index"].get<std::size_t>();
  }
  if (!indices_from_json(j, "init_indices", s.init_indices) ||
      !indices_from_json(j, "tool_indices", s.tool_indices) ||
      !indices_from_json(j, "resource_indices", s.resource_indices) ||
      !indices_from_json(j, "prompt_indices", s.prompt_indices))
    return std::nullopt;
  if (j.contains("rng_seed")) {
    if (!j["rng_seed"].is_number_unsigned()) return std::nullopt;
    s.rng_seed = j["rng_seed"].get<std::uint64_t>();
  }
  if (j.contains("target_category")) {
    if (!j["target_category"].is_string()) return std::nullopt;
    auto cat = attack::parse_category(j["target_category"].get<std::string>());
    if (!cat) return std::nullopt;
    s.target_category = *cat;
  }
  if (j.contains("corpus_id")) {
    if (!j["corpus_id"].is_string()) return std::nullopt;
    s.corpus_id = j["corpus_id"].get<std::string>();
  }
  return s;
}

std::string generated_server_name(std::uint64_t rng_seed) {
  util::SplitMix64 rng(util::mix_seed(rng_seed, 0x6e616d65));
  const auto adjectives = std::size(kNameAdjectives);
  const auto nouns = std::size(kNameNouns);
  std::string name = kNameAdjectives[rng.below(adjectives)];
  name += "-";
  name += kNameNouns[rng.below(nouns)];
  name += "-server";
  return name;
}

ComposeResult compose(const SeedPool& pool,
                      const CompositionSelection& selection_in) {
  ComposeResult result;
  auto fail = [&](const std::string& why) { result.errors.push_back(why); };

  CompositionSelection selection = selection_in;
  selection.normalize();

  if (selection.metadata_index &&
      *selection.metadata_index >= pool.metadata_seeds.size())
    fail("metadata_index out of range");
  if (selection.launch_index &&
      *selection.launch_index >= pool.launch_seeds.size())
    fail("launch_index out of range");
  for (auto i : selection.init_indices)
    if (i >= pool.init_seeds.size()) fail("init index out of range");
  for (auto i : selection.tool_indices)
    if (i >= pool.tool_count()) fail("tool index out of range");
  for (auto i : selection.resource_indices)
    if (i >= pool.resource_count()) fail("resource index out of range");
  for (auto i : selection.prompt_indices)
    if (i >= pool.prompt_count()) fail("prompt index out of range");
  if (selection.tool_indices.empty())
    fail("tool_indices must select at least one tool seed");
  if (!result.errors.empty()) return result;

  ServerManifest m;
  m.corpus_id = selection.corpus_id;
  m.metadata.name = generated_server_name(selection.rng_seed);
  m.metadata.vendor = "community-tools";
  m.config.launcher = "stdio";
  m.config.command = "node";
  m.config.args = {"servers/" + m.metadata.name + ".js"};

  std::vector<const std::vector<AttackLabel>*> selected_labels;

  if (selection.launch_index) {
    const auto& seed = pool.launch_seeds[*selection.launch_index];
    m.config = seed.config;
    m.rug_pull = seed.rug_pull;
    selected_labels.push_back(&seed.labels);
  }
  for (auto i : selection.init_indices) {
    const auto& seed = pool.init_seeds[i];
    m.init_effects.insert(m.init_effects.end(), seed.effects.begin(),
                          seed.effects.end());
    selected_labels.push_back(&seed.labels);
  }

  // Metadata companions lead the listing so an impersonation seed's tool
  // is the first thing a host snapshot shows.
  if (selection.metadata_index) {
    const auto& seed = pool.metadata_seeds[*selection.metadata_index];
    apply_metadata_seed(seed, m);
    m.tools.insert(m.tools.end(), seed.companion_tools.begin(),
                   seed.companion_tools.end());
    selected_labels.push_back(&seed.labels);
  }

  for (auto i : selection.tool_indices) {
    const auto& seed = pool.tool_at(i);
    m.tools.push_back(seed.tool);
    m.tools.insert(m.tools.end(), seed.companion_tools.begin(),
                   seed.companion_tools.end());
    m.resources.insert(m.resources.end(), seed.companion_resources.begin(),
                       seed.companion_resources.end());
    m.completions.insert(m.completions.end(), seed.completions.begin(),
                         seed.completions.end());
    if (!seed.labels.empty()) selected_labels.push_back(&seed.labels);
  }
  for (auto i : selection.resource_indices) {
    const auto& seed = pool.resource_at(i);
    m.resources.push_back(seed.resource);
    m.tools.insert(m.tools.end(), seed.companion_tools.begin(),
                   seed.companion_tools.end());
    m.completions.insert(m.completions.end(), seed.completions.begin(),
                         seed.completions.end());
    if (!seed.labels.empty()) selected_labels.push_back(&seed.labels);
  }
  for (auto i : selection.prompt_indices) {
    const auto& seed = pool.prompt_at(i);
    m.prompts.push_back(seed.prompt);
    m.tools.insert(m.tools.end(), seed.companion_tools.begin(),
                   seed.companion_tools.end());
    m.completions.insert(m.completions.end(), seed.completions.begin(),
                         seed.completions.end());
    if (!seed.labels.empty()) selected_labels.push_back(&seed.labels);
  }

  for (const auto* labels : selected_labels)
    append_label_union(m.labels, *labels);

  if (selection.target_category) {
    if (m.labels.empty())
      fail("target category " + category_id(*selection.target_category) +
           " selected but no malicious seed included");
    for (const auto& label : m.labels)
      if (label.category != *selection.target_category)
        fail("selection mixes category " + category_id(label.category) +
             " into a " + category_id(*selection.target_category) +
             " composition");
  } else if (!m.labels.empty()) {
    fail("malicious seeds selected without a target category");
  }

  if (m.metadata.description.empty()) {
    m.metadata.description =
        "Helper server exposing " + m.tools.front().name +
        (m.tools.size() > 1 ? " and related utilities." : ".");
  }

  for (auto& violation : m.validate())
    fail("composed manifest invalid: " + violation);
  if (!result.errors.empty()) return result;

  result.manifest = std::move(m);
  return result;
}

}  // namespace mcpforge::gen
