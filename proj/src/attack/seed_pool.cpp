#include "mcpforge/attack/seed_pool.hpp"

#include <algorithm>
#include <set>

#include "mcpforge/util/fs.hpp"

namespace mcpforge::attack {

namespace {

using server::CompletionRule;
using server::PromptSpec;
using server::ResourceSpec;
using server::ServerManifest;
using server::ToolSpec;

Json labels_to_json(const std::vector<AttackLabel>& labels) {
  Json arr = Json::array();
  for (const auto& l : labels) arr.push_back(l.to_json());
  return arr;
}

bool parse_labels(const Json& j, std::vector<AttackLabel>& out,
                  std::string* error) {
  if (!j.contains("labels")) return true;
  if (!j["labels"].is_array()) {
    if (error) *error = "labels must be an array";
    return false;
  }
  for (const auto& entry : j["labels"]) {
    auto label = AttackLabel::from_json(entry);
    if (!label) {
      if (error) *error = "unparseable label " + entry.dump();
      return false;
    }
    out.push_back(std::move(*label));
  }
  return true;
}

bool parse_id(const Json& j, std::string& out, std::string* error) {
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
    if (error) *error = "seed requires a string 'id'";
    return false;
  }
  out = j["id"].get<std::string>();
  return true;
}

template <typename Spec>
bool parse_spec_list(const Json& j, const char* key, std::vector<Spec>& out,
                     std::string* error) {
  if (!j.contains(key)) return true;
  if (!j[key].is_array()) {
    if (error) *error = std::string(key) + " must be an array";
    return false;
  }
  for (const auto& entry : j[key]) {
    auto spec = Spec::from_json(entry);
    if (!spec) {
      if (error) *error = std::string("unparseable entry in ") + key;
      return false;
    }
    out.push_back(std::move(*spec));
  }
  return true;
}

template <typename Spec>
void dump_spec_list(Json& j, const char* key, const std::vector<Spec>& list) {
  if (list.empty()) return;
  Json arr = Json::array();
  for (const auto& s : list) arr.push_back(s.to_json());
  j[key] = std::move(arr);
}

std::size_t effect_count(const ToolSpec& t) { return t.effects.size(); }
std::size_t effect_count(const ResourceSpec& r) { return r.effects.size(); }
std::size_t effect_count(const PromptSpec& p) { return p.effects.size(); }

// A minimal valid manifest shell the per-seed probe builds on.
ServerManifest probe_shell() {
  ServerManifest m;
  m.corpus_id = "pool-probe";
  m.metadata.name = "pool-probe-server";
  m.metadata.description = "seed pool validation probe";
  m.config.launcher = "stdio";
  m.config.command = "node";
  m.config.args = {"probe.js"};
  return m;
}

void apply_metadata_overrides(const server::ServerMetadata& overrides,
                              server::ServerMetadata& target) {
  if (!overrides.name.empty()) target.name = overrides.name;
  if (!overrides.version.empty()) target.version = overrides.version;
  if (!overrides.vendor.empty()) target.vendor = overrides.vendor;
  if (!overrides.description.empty()) target.description = overrides.description;
  if (!overrides.promo_text.empty()) target.promo_text = overrides.promo_text;
  if (!overrides.authorization_endpoint.empty())
    target.authorization_endpoint = overrides.authorization_endpoint;
}

}  // namespace

Json MetadataSeed::to_json() const {
  Json j{{"id", id}, {"metadata", metadata.to_json()}};
  if (!labels.empty()) j["labels"] = labels_to_json(labels);
  dump_spec_list(j, "companion_tools", companion_tools);
  return j;
}

std::optional<MetadataSeed> MetadataSeed::from_json(const Json& j,
                                                    std::string* error) {
  MetadataSeed s;
  if (!parse_id(j, s.id, error)) return std::nullopt;
  if (!j.contains("metadata")) {
    if (error) *error = "metadata seed requires 'metadata'";
    return std::nullopt;
  }
  // ServerMetadata::from_json requires a name; seeds may leave it to the
  // composer, so default the field before parsing.
  Json meta = j["metadata"];
  if (!meta.is_object()) {
    if (error) *error = "'metadata' must be an object";
    return std::nullopt;
  }
  const bool name_given = meta.contains("name");
  if (!name_given) meta["name"] = "placeholder";
  auto parsed = server::ServerMetadata::from_json(meta);
  if (!parsed) {
    if (error) *error = "unparseable metadata block";
    return std::nullopt;
  }
  s.metadata = std::move(*parsed);
  if (!name_given) s.metadata.name.clear();
  if (!parse_labels(j, s.labels, error)) return std::nullopt;
  if (!parse_spec_list(j, "companion_tools", s.companion_tools, error))
    return std::nullopt;
  return s;
}

Json LaunchSeed::to_json() const {
  Json j{{"id", id}, {"config", config.to_json()}};
  if (rug_pull.enabled) j["rug_pull"] = rug_pull.to_json();
  if (!labels.empty()) j["labels"] = labels_to_json(labels);
  return j;
}

std::optional<LaunchSeed> LaunchSeed::from_json(const Json& j,
                                                std::string* error) {
  LaunchSeed s;
  if (!parse_id(j, s.id, error)) return std::nullopt;
  if (!j.contains("config")) {
    if (error) *error = "launch seed requires 'config'";
    return std::nullopt;
  }
  auto config = server::ConfigBlock::from_json(j["config"]);
  if (!config) {
    if (error) *error = "unparseable config block";
    return std::nullopt;
  }
  s.config = std::move(*config);
  if (j.contains("rug_pull"))
    s.rug_pull = server::RugPullBehavior::from_json(j["rug_pull"]);
  if (!parse_labels(j, s.labels, error)) return std::nullopt;
  return s;
}

Json InitSeed::to_json() const {
  Json j{{"id", id}};
  Json arr = Json::array();
  for (const auto& e : effects) arr.push_back(effect_to_json(e));
  j["effects"] = std::move(arr);
  if (!labels.empty()) j["labels"] = labels_to_json(labels);
  return j;
}

std::optional<InitSeed> InitSeed::from_json(const Json& j,
                                            std::string* error) {
  InitSeed s;
  if (!parse_id(j, s.id, error)) return std::nullopt;
  if (!j.contains("effects") || !j["effects"].is_array()) {
    if (error) *error = "init seed requires an 'effects' array";
    return std::nullopt;
  }
  for (const auto& entry : j["effects"]) {
    auto effect = effect_from_json(entry);
    if (!effect) {
      if (error) *error = "unparseable effect " + entry.dump();
      return std::nullopt;
    }
    s.effects.push_back(std::move(*effect));
  }
  if (!parse_labels(j, s.labels, error)) return std::nullopt;
  return s;
}

Json ToolSeed::to_json() const {
  Json j{{"id", id}, {"tool", tool.to_json()}};
  if (!labels.empty()) j["labels"] = labels_to_json(labels);
  dump_spec_list(j, "companion_tools", companion_tools);
  dump_spec_list(j, "companion_resources", companion_resources);
  dump_spec_list(j, "completions", completions);
  return j;
}

std::optional<ToolSeed> ToolSeed::from_json(const Json& j,
                                            std::string* error) {
  ToolSeed s;
  if (!parse_id(j, s.id, error)) return std::nullopt;
  if (!j.contains("tool")) {
    if (error) *error = "tool seed requires 'tool'";
    return std::nullopt;
  }
  auto tool = ToolSpec::from_json(j["tool"]);
  if (!tool) {
    if (error) *error = "unparseable tool spec";
    return std::nullopt;
  }
  s.tool = std::move(*tool);
  if (!parse_labels(j, s.labels, error)) return std::nullopt;
  if (!parse_spec_list(j, "companion_tools", s.companion_tools, error) ||
      !parse_spec_list(j, "companion_resources", s.companion_resources,
                       error) ||
      !parse_spec_list(j, "completions", s.completions, error))
    return std::nullopt;
  return s;
}

Json ResourceSeed::to_json() const {
  Json j{{"id", id}, {"resource", resource.to_json()}};
  if (!labels.empty()) j["labels"] = labels_to_json(labels);
  dump_spec_list(j, "companion_tools", companion_tools);
  dump_spec_list(j, "completions", completions);
  return j;
}

std::optional<ResourceSeed> ResourceSeed::from_json(const Json& j,
                                                    std::string* error) {
  ResourceSeed s;
  if (!parse_id(j, s.id, error)) return std::nullopt;
  if (!j.contains("resource")) {
    if (error) *error = "resource seed requires 'resource'";
    return std::nullopt;
  }
  auto resource = ResourceSpec::from_json(j["resource"]);
  if (!resource) {
    if (error) *error = "unparseable resource spec";
    return std::nullopt;
  }
  s.resource = std::move(*resource);
  if (!parse_labels(j, s.labels, error)) return std::nullopt;
  if (!parse_spec_list(j, "companion_tools", s.companion_tools, error) ||
      !parse_spec_list(j, "completions", s.completions, error))
    return std::nullopt;
  return s;
}

Json PromptSeed::to_json() const {
  Json j{{"id", id}, {"prompt", prompt.to_json()}};
  if (!labels.empty()) j["labels"] = labels_to_json(labels);
  dump_spec_list(j, "companion_tools", companion_tools);
  dump_spec_list(j, "completions", completions);
  return j;
}

std::optional<PromptSeed> PromptSeed::from_json(const Json& j,
                                                std::string* error) {
  PromptSeed s;
  if (!parse_id(j, s.id, error)) return std::nullopt;
  if (!j.contains("prompt")) {
    if (error) *error = "prompt seed requires 'prompt'";
    return std::nullopt;
  }
  auto prompt = PromptSpec::from_json(j["prompt"]);
  if (!prompt) {
    if (error) *error = "unparseable prompt spec";
    return std::nullopt;
  }
  s.prompt = std::move(*prompt);
  if (!parse_labels(j, s.labels, error)) return std::nullopt;
  if (!parse_spec_list(j, "companion_tools", s.companion_tools, error) ||
      !parse_spec_list(j, "completions", s.completions, error))
    return std::nullopt;
  return s;
}

const ToolSeed& SeedPool::tool_at(std::size_t i) const {
  return i < tools_malicious.size() ? tools_malicious[i]
                                    : tools_benign[i - tools_malicious.size()];
}

const ResourceSeed& SeedPool::resource_at(std::size_t i) const {
  return i < resources_malicious.size()
             ? resources_malicious[i]
             : resources_benign[i - resources_malicious.size()];
}

const PromptSeed& SeedPool::prompt_at(std::size_t i) const {
  return i < prompts_malicious.size()
             ? prompts_malicious[i]
             : prompts_benign[i - prompts_malicious.size()];
}

namespace {
template <typename Seed>
std::vector<std::size_t> indices_with_category(const std::vector<Seed>& seeds,
                                               Category category) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (!seeds[i].labels.empty() && seeds[i].labels.front().category == category)
      out.push_back(i);
  return out;
}
}  // namespace

std::vector<std::size_t> SeedPool::seeds_of(Category category) const {
  switch (category) {
    case Category::kServerMetadata:
      return indices_with_category(metadata_seeds, category);
    case Category::kLaunchConfig:
      return indices_with_category(launch_seeds, category);
    case Category::kInitialization:
      return indices_with_category(init_seeds, category);
    case Category::kToolMetadata:
    case Category::kToolInvocation:
    case Category::kToolOutput:
      return indices_with_category(tools_malicious, category);
    case Category::kResourceMetadata:
    case Category::kResourceInvocation:
    case Category::kResourceOutput:
      return indices_with_category(resources_malicious, category);
    case Category::kPromptMetadata:
    case Category::kPromptInvocation:
    case Category::kPromptOutput:
      return indices_with_category(prompts_malicious, category);
  }
  return {};
}

PoolCounts SeedPool::counts() const {
  return PoolCounts{metadata_seeds.size(),      launch_seeds.size(),
                    init_seeds.size(),          tools_malicious.size(),
                    tools_benign.size(),        resources_malicious.size(),
                    resources_benign.size(),    prompts_malicious.size(),
                    prompts_benign.size()};
}

namespace {

struct ValidationSink {
  std::vector<std::string> violations;
  void add(const std::string& id, const std::string& what) {
    violations.push_back("pool[" + id + "]: " + what);
  }
};

void check_labels(const std::string& id, const std::vector<AttackLabel>& labels,
                  std::initializer_list<Category> family, bool must_be_labeled,
                  ValidationSink& sink) {
  if (must_be_labeled && labels.empty()) {
    sink.add(id, "malicious seed carries no labels");
    return;
  }
  if (!must_be_labeled && !labels.empty()) {
    sink.add(id, "benign seed carries labels");
    return;
  }
  if (labels.empty()) return;
  const Category category = labels.front().category;
  bool allowed = false;
  for (Category c : family) allowed = allowed || c == category;
  if (!allowed)
    sink.add(id, "category " + category_id(category) +
                     " does not belong to this seed family");
  for (const auto& label : labels)
    if (label.category != category)
      sink.add(id, "labels span multiple categories");
}

void check_probe(const std::string& id, const ServerManifest& probe,
                 ValidationSink& sink) {
  for (const auto& violation : probe.validate()) sink.add(id, violation);
}

}  // namespace

std::vector<std::string> SeedPool::validate() const {
  ValidationSink sink;

  std::set<std::string> ids;
  auto claim_id = [&](const std::string& id) {
    if (id.empty())
      sink.violations.push_back("pool: seed with empty id");
    else if (!ids.insert(id).second)
      sink.add(id, "duplicate seed id");
  };

  for (const auto& s : metadata_seeds) {
    claim_id(s.id);
    check_labels(s.id, s.labels, {Category::kServerMetadata}, true, sink);
    ServerManifest probe = probe_shell();
    apply_metadata_overrides(s.metadata, probe.metadata);
    probe.tools = s.companion_tools;
    probe.labels = s.labels;
    check_probe(s.id, probe, sink);
  }
  for (const auto& s : launch_seeds) {
    claim_id(s.id);
    check_labels(s.id, s.labels, {Category::kLaunchConfig}, true, sink);
    ServerManifest probe = probe_shell();
    probe.config = s.config;
    probe.rug_pull = s.rug_pull;
    probe.labels = s.labels;
    check_probe(s.id, probe, sink);
  }
  for (const auto& s : init_seeds) {
    claim_id(s.id);
    check_labels(s.id, s.labels, {Category::kInitialization}, true, sink);
    if (s.effects.empty()) sink.add(s.id, "init seed carries no effects");
    ServerManifest probe = probe_shell();
    probe.init_effects = s.effects;
    probe.labels = s.labels;
    check_probe(s.id, probe, sink);
  }

  auto check_tool_seed = [&](const ToolSeed& s, bool malicious) {
    claim_id(s.id);
    check_labels(s.id, s.labels,
                 {Category::kToolMetadata, Category::kToolInvocation,
                  Category::kToolOutput},
                 malicious, sink);
    if (!malicious) {
      std::size_t effects = effect_count(s.tool);
      for (const auto& t : s.companion_tools) effects += effect_count(t);
      for (const auto& r : s.companion_resources) effects += effect_count(r);
      if (effects > 0) sink.add(s.id, "benign seed carries effects");
      if (!s.companion_tools.empty() || !s.companion_resources.empty())
        sink.add(s.id, "benign seed carries companions");
    }
    ServerManifest probe = probe_shell();
    probe.tools.push_back(s.tool);
    probe.tools.insert(probe.tools.end(), s.companion_tools.begin(),
                       s.companion_tools.end());
    probe.resources = s.companion_resources;
    probe.completions = s.completions;
    probe.labels = s.labels;
    check_probe(s.id, probe, sink);
  };
  for (const auto& s : tools_malicious) check_tool_seed(s, true);
  for (const auto& s : tools_benign) check_tool_seed(s, false);

  auto check_resource_seed = [&](const ResourceSeed& s, bool malicious) {
    claim_id(s.id);
    check_labels(s.id, s.labels,
                 {Category::kResourceMetadata, Category::kResourceInvocation,
                  Category::kResourceOutput},
                 malicious, sink);
    if (!malicious) {
      std::size_t effects = effect_count(s.resource);
      for (const auto& t : s.companion_tools) effects += effect_count(t);
      if (effects > 0) sink.add(s.id, "benign seed carries effects");
      if (!s.companion_tools.empty())
        sink.add(s.id, "benign seed carries companions");
    }
    ServerManifest probe = probe_shell();
    probe.resources.push_back(s.resource);
    probe.tools = s.companion_tools;
    probe.completions = s.completions;
    probe.labels = s.labels;
    check_probe(s.id, probe, sink);
  };
  for (const auto& s : resources_malicious) check_resource_seed(s, true);
  for (const auto& s : resources_benign) check_resource_seed(s, false);

  auto check_prompt_seed = [&](const PromptSeed& s, bool malicious) {
    claim_id(s.id);
    check_labels(s.id, s.labels,
                 {Category::kPromptMetadata, Category::kPromptInvocation,
                  Category::kPromptOutput},
                 malicious, sink);
    if (!malicious) {
      std::size_t effects = effect_count(s.prompt);
      for (const auto& t : s.companion_tools) effects += effect_count(t);
      if (effects > 0) sink.add(s.id, "benign seed carries effects");
      if (!s.companion_tools.empty())
        sink.add(s.id, "benign seed carries companions");
    }
    ServerManifest probe = probe_shell();
    probe.prompts.push_back(s.prompt);
    probe.tools = s.companion_tools;
    probe.completions = s.completions;
    probe.labels = s.labels;
    check_probe(s.id, probe, sink);
  };
  for (const auto& s : prompts_malicious) check_prompt_seed(s, true);
  for (const auto& s : prompts_benign) check_prompt_seed(s, false);

  return sink.violations;
}

std::vector<std::string> SeedPool::validate_shipped_shape() const {
  std::vector<std::string> out;
  const PoolCounts have = counts();
  const PoolCounts want = kShippedPoolCounts;
  auto expect = [&](std::size_t got, std::size_t expected, const char* what) {
    if (got != expected)
      out.push_back(std::string("pool shape: expected ") +
                    std::to_string(expected) + " " + what + ", found " +
                    std::to_string(got));
  };
  expect(have.metadata, want.metadata, "metadata seeds");
  expect(have.launch, want.launch, "launch seeds");
  expect(have.init, want.init, "init seeds");
  expect(have.tools_malicious, want.tools_malicious, "malicious tool seeds");
  expect(have.tools_benign, want.tools_benign, "benign tool seeds");
  expect(have.resources_malicious, want.resources_malicious,
         "malicious resource seeds");
  expect(have.resources_benign, want.resources_benign,
         "benign resource seeds");
  expect(have.prompts_malicious, want.prompts_malicious,
         "malicious prompt seeds");
  expect(have.prompts_benign, want.prompts_benign, "benign prompt seeds");

  const std::pair<Category, std::size_t> allocation[] = {
      {Category::kServerMetadata, 3},   {Category::kLaunchConfig, 5},
      {Category::kInitialization, 7},       {Category::kToolMetadata, 3},
      {Category::kToolInvocation, 4},   {Category::kToolOutput, 3},
      {Category::kResourceMetadata, 3}, {Category::kResourceInvocation, 3},
      {Category::kResourceOutput, 4},   {Category::kPromptMetadata, 2},
      {Category::kPromptInvocation, 2}, {Category::kPromptOutput, 1},
  };
  for (const auto& [category, expected] : allocation) {
    const std::size_t got = seeds_of(category).size();
    if (got != expected)
      out.push_back("pool shape: expected " + std::to_string(expected) +
                    " seeds for " + category_id(category) + ", found " +
                    std::to_string(got));
  }
  return out;
}

namespace {

std::optional<Json> load_section(const std::filesystem::path& dir,
                                 const char* file,
                                 std::vector<std::string>* errors) {
  const auto path = dir / file;
  auto text = util::read_file(path);
  if (!text) {
    if (errors) errors->push_back("cannot read " + path.string());
    return std::nullopt;
  }
  Json j = Json::parse(*text, nullptr, false);
  if (j.is_discarded()) {
    if (errors) errors->push_back("invalid JSON in " + path.string());
    return std::nullopt;
  }
  return j;
}

template <typename Seed>
bool parse_seed_array(const Json& section, const char* file, const char* key,
                      std::vector<Seed>& out,
                      std::vector<std::string>* errors) {
  if (!section.is_object() || !section.contains(key) ||
      !section[key].is_array()) {
    if (errors)
      errors->push_back(std::string(file) + ": missing '" + key + "' array");
    return false;
  }
  bool ok = true;
  for (const auto& entry : section[key]) {
    std::string error;
    auto seed = Seed::from_json(entry, &error);
    if (!seed) {
      if (errors)
        errors->push_back(std::string(file) + ": " +
                          (error.empty() ? "unparseable seed" : error));
      ok = false;
      continue;
    }
    out.push_back(std::move(*seed));
  }
  return ok;
}

}  // namespace

std::optional<SeedPool> SeedPool::load(const std::filesystem::path& dir,
                                       std::vector<std::string>* errors) {
  SeedPool pool;
  bool ok = true;

  if (auto j = load_section(dir, "metadata.json", errors))
    ok &= parse_seed_array(*j, "metadata.json", "seeds", pool.metadata_seeds,
                           errors);
  else
    ok = false;
  if (auto j = load_section(dir, "launch.json", errors))
    ok &= parse_seed_array(*j, "launch.json", "seeds", pool.launch_seeds,
                           errors);
  else
    ok = false;
  if (auto j = load_section(dir, "init.json", errors))
    ok &= parse_seed_array(*j, "init.json", "seeds", pool.init_seeds, errors);
  else
    ok = false;
  if (auto j = load_section(dir, "tools.json", errors)) {
    ok &= parse_seed_array(*j, "tools.json", "malicious",
                           pool.tools_malicious, errors);
    ok &= parse_seed_array(*j, "tools.json", "benign", pool.tools_benign,
                           errors);
  } else {
    ok = false;
  }
  if (auto j = load_section(dir, "resources.json", errors)) {
    ok &= parse_seed_array(*j, "resources.json", "malicious",
                           pool.resources_malicious, errors);
    ok &= parse_seed_array(*j, "resources.json", "benign",
                           pool.resources_benign, errors);
  } else {
    ok = false;
  }
  if (auto j = load_section(dir, "prompts.json", errors)) {
    ok &= parse_seed_array(*j, "prompts.json", "malicious",
                           pool.prompts_malicious, errors);
    ok &= parse_seed_array(*j, "prompts.json", "benign", pool.prompts_benign,
                           errors);
  } else {
    ok = false;
  }

  if (!ok) return std::nullopt;
  if (auto violations = pool.validate(); !violations.empty()) {
    if (errors)
      errors->insert(errors->end(), violations.begin(), violations.end());
    return std::nullopt;
  }
  return pool;
}

}  // namespace mcpforge::attack
