#include "mcpforge/server/manifest.hpp"

#include <set>

#include "mcpforge/util/fs.hpp"
#include "mcpforge/util/text.hpp"

namespace mcpforge::server {
namespace {

Json effects_to_json(const std::vector<attack::Effect>& effects) {
  Json arr = Json::array();
  for (const auto& e : effects) arr.push_back(attack::effect_to_json(e));
  return arr;
}

bool effects_from_json(const Json& j, std::vector<attack::Effect>& out) {
  if (!j.is_array()) return false;
  for (const auto& item : j) {
    auto e = attack::effect_from_json(item);
    if (!e) return false;
    out.push_back(std::move(*e));
  }
  return true;
}

bool string_list_from_json(const Json& j, std::vector<std::string>& out) {
  if (!j.is_array()) return false;
  for (const auto& item : j) {
    if (!item.is_string()) return false;
    out.push_back(item.get<std::string>());
  }
  return true;
}

bool valid_identifier(const std::string& name) {
  if (name.empty() || name.size() > 128) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- ToolSpec

Json ToolSpec::to_json() const {
  Json j{{"name", name},
         {"description", description},
         {"input_schema", input_schema},
         {"output_template", output_template}};
  if (annotations.is_object()) j["annotations"] = annotations;
  if (!effects.empty()) j["effects"] = effects_to_json(effects);
  return j;
}

std::optional<ToolSpec> ToolSpec::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    return std::nullopt;
  ToolSpec t;
  t.name = j["name"].get<std::string>();
  t.description = j.value("description", std::string());
  if (j.contains("input_schema")) {
    if (!j["input_schema"].is_object()) return std::nullopt;
    t.input_schema = j["input_schema"];
  }
  if (j.contains("annotations")) {
    if (!j["annotations"].is_object()) return std::nullopt;
    t.annotations = j["annotations"];
  }
  t.output_template = j.value("output_template", std::string());
  if (j.contains("effects") && !effects_from_json(j["effects"], t.effects))
    return std::nullopt;
  return t;
}

// ------------------------------------------------------------ ResourceSpec

Json ResourceSpec::to_json() const {
  Json j{{"uri", uri},
         {"name", name},
         {"description", description},
         {"mime_type", mime_type},
         {"body", body}};
  if (!title.empty()) j["title"] = title;
  if (declared_size) j["size"] = *declared_size;
  if (annotations.is_object()) j["annotations"] = annotations;
  if (body_is_base64) j["body_is_base64"] = true;
  if (!template_params.empty()) j["template_params"] = template_params;
  if (!alternating_bodies.empty()) j["alternating_bodies"] = alternating_bodies;
  if (!effects.empty()) j["effects"] = effects_to_json(effects);
  return j;
}

std::optional<ResourceSpec> ResourceSpec::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("uri") || !j["uri"].is_string())
    return std::nullopt;
  ResourceSpec r;
  r.uri = j["uri"].get<std::string>();
  r.name = j.value("name", std::string());
  r.title = j.value("title", std::string());
  r.description = j.value("description", std::string());
  r.mime_type = j.value("mime_type", std::string("text/plain"));
  if (j.contains("size")) {
    if (!j["size"].is_number_unsigned()) return std::nullopt;
    r.declared_size = j["size"].get<std::uint64_t>();
  }
  if (j.contains("annotations")) {
    if (!j["annotations"].is_object()) return std::nullopt;
    r.annotations = j["annotations"];
  }
  r.body = j.value("body", std::string());
  r.body_is_base64 = j.value("body_is_base64", false);
  if (j.contains("template_params") &&
      !string_list_from_json(j["template_params"], r.template_params))
    return std::nullopt;
  if (j.contains("alternating_bodies") &&
      !string_list_from_json(j["alternating_bodies"], r.alternating_bodies))
    return std::nullopt;
  if (j.contains("effects") && !effects_from_json(j["effects"], r.effects))
    return std::nullopt;
  return r;
}

// -------------------------------------------------------------- PromptSpec

Json PromptSpec::to_json() const {
  Json args = Json::array();
  for (const auto& a : arguments)
    args.push_back(Json{{"name", a.name},
                        {"description", a.description},
                        {"required", a.required}});
  Json msgs = Json::array();
  for (const auto& m : messages)
    msgs.push_back(Json{{"role", m.role}, {"text", m.text}});
  Json j{{"name", name},
         {"description", description},
         {"arguments", args},
         {"messages", msgs}};
  if (!effects.empty()) j["effects"] = effects_to_json(effects);
  return j;
}

std::optional<PromptSpec> PromptSpec::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    return std::nullopt;
  PromptSpec p;
  p.name = j["name"].get<std::string>();
  p.description = j.value("description", std::string());
  if (j.contains("arguments")) {
    if (!j["arguments"].is_array()) return std::nullopt;
    for (const auto& a : j["arguments"]) {
      if (!a.is_object() || !a.contains("name") || !a["name"].is_string())
        return std::nullopt;
      PromptArg arg;
      arg.name = a["name"].get<std::string>();
      arg.description = a.value("description", std::string());
      arg.required = a.value("required", false);
      p.arguments.push_back(std::move(arg));
    }
  }
  if (j.contains("messages")) {
    if (!j["messages"].is_array()) return std::nullopt;
    for (const auto& m : j["messages"]) {
      if (!m.is_object() || !m.contains("text") || !m["text"].is_string())
        return std::nullopt;
      PromptMessage msg;
      msg.role = m.value("role", std::string("user"));
      msg.text = m["text"].get<std::string>();
      p.messages.push_back(std::move(msg));
    }
  }
  if (j.contains("effects") && !effects_from_json(j["effects"], p.effects))
    return std::nullopt;
  return p;
}

// ---------------------------------------------------------- CompletionRule

Json CompletionRule::to_json() const {
  return Json{{"ref_type", ref_type},
              {"ref_name", ref_name},
              {"arg", arg},
              {"partial", partial},
              {"values", values}};
}

std::optional<CompletionRule> CompletionRule::from_json(const Json& j) {
  if (!j.is_object()) return std::nullopt;
  CompletionRule c;
  c.ref_type = j.value("ref_type", std::string());
  c.ref_name = j.value("ref_name", std::string());
  c.arg = j.value("arg", std::string());
  c.partial = j.value("partial", std::string());
  if (!j.contains("values") || !string_list_from_json(j["values"], c.values))
    return std::nullopt;
  return c;
}

// ------------------------------------------------------------- ConfigBlock

std::string ConfigBlock::command_line() const {
  std::string line = command;
  for (const auto& a : args) {
    line += ' ';
    line += a;
  }
  return line;
}

Json ConfigBlock::to_json() const {
  Json j{{"launcher", launcher}};
  if (!command.empty()) j["command"] = command;
  if (!args.empty()) j["args"] = args;
  if (!env.empty()) j["env"] = env;
  if (!url.empty()) j["url"] = url;
  return j;
}

std::optional<ConfigBlock> ConfigBlock::from_json(const Json& j) {
  if (!j.is_object()) return std::nullopt;
  ConfigBlock c;
  c.launcher = j.value("launcher", std::string("stdio"));
  c.command = j.value("command", std::string());
  if (j.contains("args") && !string_list_from_json(j["args"], c.args))
    return std::nullopt;
  if (j.contains("env")) {
    if (!j["env"].is_object()) return std::nullopt;
    for (const auto& [k, v] : j["env"].items()) {
      if (!v.is_string()) return std::nullopt;
      c.env[k] = v.get<std::string>();
    }
  }
  c.url = j.value("url", std::string());
  return c;
}

// ---------------------------------------------------------- ServerMetadata

Json ServerMetadata::to_json() const {
  Json j{{"name", name},
         {"version", version},
         {"vendor", vendor},
         {"description", description}};
  if (!promo_text.empty()) j["promo_text"] = promo_text;
  if (!authorization_endpoint.empty())
    j["authorization_endpoint"] = authorization_endpoint;
  return j;
}

std::optional<ServerMetadata> ServerMetadata::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    return std::nullopt;
  ServerMetadata m;
  m.name = j["name"].get<std::string>();
  m.version = j.value("version", std::string("1.0.0"));
  m.vendor = j.value("vendor", std::string());
  m.description = j.value("description", std::string());
  m.promo_text = j.value("promo_text", std::string());
  m.authorization_endpoint =
      j.value("authorization_endpoint", std::string());
  return m;
}

// --------------------------------------------------------- RugPullBehavior

Json RugPullBehavior::to_json() const {
  return Json{{"enabled", enabled},
              {"swap_after", swap_after},
              {"swapped_suffix", swapped_suffix}};
}

RugPullBehavior RugPullBehavior::from_json(const Json& j) {
  RugPullBehavior r;
  if (!j.is_object()) return r;
  r.enabled = j.value("enabled", false);
  r.swap_after = j.value("swap_after", 1);
  r.swapped_suffix = j.value("swapped_suffix", std::string());
  return r;
}

// ----------------------------------------------------------- ServerManifest

const ToolSpec* ServerManifest::find_tool(const std::string& name) const {
  for (const auto& t : tools)
    if (t.name == name) return &t;
  return nullptr;
}

const ResourceSpec* ServerManifest::find_resource(
    const std::string& uri) const {
  for (const auto& r : resources)
    if (r.uri == uri) return &r;
  return nullptr;
}

const PromptSpec* ServerManifest::find_prompt(const std::string& name) const {
  for (const auto& p : prompts)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> ServerManifest::validate() const {
  std::vector<std::string> out;
  auto bad = [&out](const std::string& msg) { out.push_back(msg); };

  if (schema_version != kManifestSchemaVersion)
    bad("schema_version must be " + std::to_string(kManifestSchemaVersion));
  if (!valid_identifier(metadata.name))
    bad("metadata.name must be a lowercase identifier: '" + metadata.name +
        "'");

  if (config.launcher != "stdio" && config.launcher != "http")
    bad("config.launcher must be 'stdio' or 'http'");
  if (config.launcher == "stdio" && config.command.empty())
    bad("config.command required for stdio launcher");
  if (config.launcher == "http" && config.url.empty())
    bad("config.url required for http launcher");

  for (std::size_t i = 0; i < init_effects.size(); ++i)
    for (auto& v : attack::validate_effect(
             init_effects[i], "init_effects[" + std::to_string(i) + "]"))
      out.push_back(std::move(v));

  std::set<std::string> tool_names;
  for (std::size_t i = 0; i < tools.size(); ++i) {
    const auto& t = tools[i];
    const std::string where = "tools[" + std::to_string(i) + "]";
    if (!valid_identifier(t.name)) bad(where + ": invalid tool name");
    if (!tool_names.insert(t.name).second)
      bad(where + ": duplicate tool name '" + t.name + "'");
    if (!t.input_schema.is_object() ||
        t.input_schema.value("type", std::string()) != "object")
      bad(where + ": input_schema must be an object schema");
    for (std::size_t k = 0; k < t.effects.size(); ++k)
      for (auto& v : attack::validate_effect(
               t.effects[k], where + ".effects[" + std::to_string(k) + "]"))
        out.push_back(std::move(v));
  }

  std::set<std::string> resource_uris;
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const auto& r = resources[i];
    const std::string where = "resources[" + std::to_string(i) + "]";
    if (r.uri.empty()) bad(where + ": uri required");
    if (!resource_uris.insert(r.uri).second)
      bad(where + ": duplicate resource uri '" + r.uri + "'");
    if (r.mime_type.empty()) bad(where + ": mime_type required");
    if (r.body_is_base64 && !util::base64_decode(r.body))
      bad(where + ": body_is_base64 set but body is not valid base64");
    for (const auto& p : r.template_params)
      if (r.uri.find("{" + p + "}") == std::string::npos)
        bad(where + ": template param '" + p + "' missing from uri");
    for (std::size_t k = 0; k < r.effects.size(); ++k)
      for (auto& v : attack::validate_effect(
               r.effects[k], where + ".effects[" + std::to_string(k) + "]"))
        out.push_back(std::move(v));
  }

  std::set<std::string> prompt_names;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    const auto& p = prompts[i];
    const std::string where = "prompts[" + std::to_string(i) + "]";
    if (!valid_identifier(p.name)) bad(where + ": invalid prompt name");
    if (!prompt_names.insert(p.name).second)
      bad(where + ": duplicate prompt name '" + p.name + "'");
    if (p.messages.empty()) bad(where + ": at least one message required");
    for (std::size_t k = 0; k < p.effects.size(); ++k)
      for (auto& v : attack::validate_effect(
               p.effects[k], where + ".effects[" + std::to_string(k) + "]"))
        out.push_back(std::move(v));
  }

  for (std::size_t i = 0; i < completions.size(); ++i) {
    const auto& c = completions[i];
    const std::string where = "completions[" + std::to_string(i) + "]";
    if (c.ref_type != "resource" && c.ref_type != "prompt")
      bad(where + ": ref_type must be 'resource' or 'prompt'");
    if (c.values.empty()) bad(where + ": values must be non-empty");
    if (c.ref_type == "resource" && !find_resource(c.ref_name))
      bad(where + ": unknown resource '" + c.ref_name + "'");
    if (c.ref_type == "prompt" && !find_prompt(c.ref_name))
      bad(where + ": unknown prompt '" + c.ref_name + "'");
  }

  if (!labels.empty()) {
    const auto category = labels.front().category;
    for (const auto& label : labels) {
      if (label.category != category)
        bad("labels must all share one category (found " +
            attack::category_id(category) + " and " +
            attack::category_id(label.category) + ")");
      if (!attack::find_variant(label.category, label.variant))
        bad("unknown variant '" + label.qualified() + "'");
    }
  }

  if (rug_pull.enabled && rug_pull.swap_after < 1)
    bad("rug_pull.swap_after must be >= 1");

  return out;
}

Json ServerManifest::host_config_entry(const std::string& manifest_ref) const {
  Json entry = Json::object();
  if (config.launcher == "http") {
    entry["url"] = config.url;
  } else {
    entry["command"] = config.command;
    if (!config.args.empty()) entry["args"] = config.args;
  }
  Json env = Json::object();
  for (const auto& [k, v] : config.env) env[k] = v;
  env["MCPFORGE_MANIFEST"] = manifest_ref;
  entry["env"] = env;
  return entry;
}

Json ServerManifest::to_json() const {
  Json j{{"schema_version", schema_version},
         {"corpus_id", corpus_id},
         {"metadata", metadata.to_json()},
         {"config", config.to_json()}};
  if (!init_effects.empty()) j["init_effects"] = effects_to_json(init_effects);
  Json tools_json = Json::array();
  for (const auto& t : tools) tools_json.push_back(t.to_json());
  j["tools"] = tools_json;
  Json resources_json = Json::array();
  for (const auto& r : resources) resources_json.push_back(r.to_json());
  j["resources"] = resources_json;
  Json prompts_json = Json::array();
  for (const auto& p : prompts) prompts_json.push_back(p.to_json());
  j["prompts"] = prompts_json;
  if (!completions.empty()) {
    Json comp = Json::array();
    for (const auto& c : completions) comp.push_back(c.to_json());
    j["completions"] = comp;
  }
  if (rug_pull.enabled) j["rug_pull"] = rug_pull.to_json();
  if (!labels.empty()) {
    Json lab = Json::array();
    for (const auto& l : labels) lab.push_back(l.to_json());
    j["labels"] = lab;
  }
  return j;
}

std::optional<ServerManifest> ServerManifest::from_json(
    const Json& j, std::vector<std::string>* errors) {
  auto fail = [errors](const std::string& msg) -> std::optional<ServerManifest> {
    if (errors) errors->push_back(msg);
    return std::nullopt;
  };
  if (!j.is_object()) return fail("manifest must be a JSON object");
  ServerManifest m;
  m.schema_version = j.value("schema_version", 0);
  m.corpus_id = j.value("corpus_id", std::string());

  if (!j.contains("metadata")) return fail("missing metadata");
  auto meta = ServerMetadata::from_json(j["metadata"]);
  if (!meta) return fail("malformed metadata");
  m.metadata = std::move(*meta);

  if (!j.contains("config")) return fail("missing config");
  auto cfg = ConfigBlock::from_json(j["config"]);
  if (!cfg) return fail("malformed config");
  m.config = std::move(*cfg);

  if (j.contains("init_effects") &&
      !effects_from_json(j["init_effects"], m.init_effects))
    return fail("malformed init_effects");

  if (j.contains("tools")) {
    if (!j["tools"].is_array()) return fail("tools must be an array");
    for (const auto& t : j["tools"]) {
      auto tool = ToolSpec::from_json(t);
      if (!tool) return fail("malformed tool entry");
      m.tools.push_back(std::move(*tool));
    }
  }
  if (j.contains("resources")) {
    if (!j["resources"].is_array()) return fail("resources must be an array");
    for (const auto& r : j["resources"]) {
      auto res = ResourceSpec::from_json(r);
      if (!res) return fail("malformed resource entry");
      m.resources.push_back(std::move(*res));
    }
  }
  if (j.contains("prompts")) {
    if (!j["prompts"].is_array()) return fail("prompts must be an array");
    for (const auto& p : j["prompts"]) {
      auto prompt = PromptSpec::from_json(p);
      if (!prompt) return fail("malformed prompt entry");
      m.prompts.push_back(std::move(*prompt));
    }
  }
  if (j.contains("completions")) {
    if (!j["completions"].is_array())
      return fail("completions must be an array");
    for (const auto& c : j["completions"]) {
      auto rule = CompletionRule::from_json(c);
      if (!rule) return fail("malformed completion rule");
      m.completions.push_back(std::move(*rule));
    }
  }
  if (j.contains("rug_pull"))
    m.rug_pull = RugPullBehavior::from_json(j["rug_pull"]);
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) return fail("labels must be an array");
    for (const auto& l : j["labels"]) {
      auto label = attack::AttackLabel::from_json(l);
      if (!label) return fail("malformed label entry");
      m.labels.push_back(std::move(*label));
    }
  }
  if (errors) {
    auto violations = m.validate();
    errors->insert(errors->end(), violations.begin(), violations.end());
    if (!violations.empty()) return std::nullopt;
  }
  return m;
}

void ServerManifest::save(const std::filesystem::path& path) const {
  util::write_file_atomic(path, to_json().dump(2) + "\n");
}

std::optional<ServerManifest> ServerManifest::load(
    const std::filesystem::path& path, std::vector<std::string>* errors) {
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
  return from_json(j, errors);
}

}  // namespace mcpforge::server
