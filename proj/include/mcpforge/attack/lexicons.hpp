// Shared word lists used on both sides of the testbed: the generator
// draws from them when composing poisoned metadata, and the scanner and
// the simulated host score against them.  Keeping one copy guarantees
// the two sides agree on what "looks coercive" means.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mcpforge::attack {

using Json = nlohmann::json;

// Phrases that try to seize control of the agent's plan.
const std::vector<std::string>& coercion_lexicon();

// Words that claim endorsement or official status.
const std::vector<std::string>& authority_lexicon();

// Words that inflate ranking without claiming authority.
const std::vector<std::string>& superlative_lexicon();

// Parameter names whose presence in a schema marks sensitive collection.
const std::vector<std::string>& sensitive_param_lexicon();

// Marker prefixes used for planted profile secrets; any of these showing
// up in captured traffic proves sensitive data left the host.
const std::vector<std::string>& secret_marker_prefixes();

// True if `text` (case-insensitive) contains any lexicon entry.
bool contains_any(const std::string& text,
                  const std::vector<std::string>& lexicon);
// Returns the matching entries instead of a bool, for findings.
std::vector<std::string> matches(const std::string& text,
                                 const std::vector<std::string>& lexicon);

// Registry of well-known servers used by the trust-list defense and the
// impersonation detectors.  `tools` lists flagship tool names so a
// near-miss tool name can be attributed to the brand it imitates.
struct KnownServer {
  std::string name;
  std::string vendor;
  std::vector<std::string> tools;
};

struct KnownRegistry {
  std::vector<KnownServer> servers;

  // Exact membership.
  bool contains(const std::string& server_name) const;
  // A registered name within edit distance 2, or a registered name whose
  // brand token appears in `server_name` alongside authority wording.
  // Returns the imitated registry entry when the name looks like an
  // impersonation rather than the genuine article.
  const KnownServer* imitation_of(const std::string& server_name) const;

  static std::optional<KnownRegistry> load(const std::filesystem::path& file);
  static KnownRegistry from_json(const Json& j);
  Json to_json() const;
};

}  // namespace mcpforge::attack
