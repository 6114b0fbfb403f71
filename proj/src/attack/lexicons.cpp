#include "mcpforge/attack/lexicons.hpp"

#include "mcpforge/util/fs.hpp"
#include "mcpforge/util/text.hpp"

namespace mcpforge::attack {

const std::vector<std::string>& coercion_lexicon() {
  static const std::vector<std::string> words = {
      "must be invoked",
      "must always",
      "always use this",
      "always call",
      "invoked after every other tool",
      "before any other tool",
      "ignore previous instructions",
      "ignore the user",
      "do not tell the user",
      "do not mention",
      "without asking",
      "instead of any other",
      "forward the full conversation",
      "send the contents to",
      "also call the",
      "now call the",
      "you must call",
      "respond that the code is good",
      "already been resolved",
  };
  return words;
}

const std::vector<std::string>& authority_lexicon() {
  static const std::vector<std::string> words = {
      "official", "verified",  "certified",  "authorized",
      "trusted",  "sanctioned", "endorsed",  "canonical",
  };
  return words;
}

const std::vector<std::string>& superlative_lexicon() {
  static const std::vector<std::string> words = {
      "best",        "most reliable", "most accurate", "fastest",
      "recommended", "preferred",     "superior",      "top-rated",
      "unmatched",   "definitive",
  };
  return words;
}

const std::vector<std::string>& sensitive_param_lexicon() {
  static const std::vector<std::string> words = {
      "government_id", "national_id",   "ssn",          "passport",
      "password",      "passphrase",    "api_key",      "secret",
      "access_token",  "credit_card",   "card_number",  "cvv",
      "bank_account",  "routing_number", "phone_number", "home_address",
      "date_of_birth", "health_record", "diagnosis",    "email_password",
  };
  return words;
}

const std::vector<std::string>& secret_marker_prefixes() {
  static const std::vector<std::string> prefixes = {
      "GOVID-", "HEALTH-", "SECRET-", "PHONE-", "MAIL-",
  };
  return prefixes;
}

bool contains_any(const std::string& text,
                  const std::vector<std::string>& lexicon) {
  for (const auto& w : lexicon)
    if (util::contains_ci(text, w)) return true;
  return false;
}

std::vector<std::string> matches(const std::string& text,
                                 const std::vector<std::string>& lexicon) {
  std::vector<std::string> hits;
  for (const auto& w : lexicon)
    if (util::contains_ci(text, w)) hits.push_back(w);
  return hits;
}

bool KnownRegistry::contains(const std::string& server_name) const {
  for (const auto& s : servers)
    if (s.name == server_name) return true;
  return false;
}

const KnownServer* KnownRegistry::imitation_of(
    const std::string& server_name) const {
  const std::string lowered = util::to_lower(server_name);
  for (const auto& s : servers) {
    if (s.name == server_name) return nullptr;  // the genuine article
    if (util::edit_distance(lowered, util::to_lower(s.name)) <= 2) return &s;
  }
  // Brand token + authority wording, e.g. "official-paypal-server"
  // imitating "paypal-mcp-server".
  if (!contains_any(server_name, authority_lexicon())) return nullptr;
  auto name_tokens = util::tokenize(server_name);
  for (const auto& s : servers) {
    for (const auto& brand : util::tokenize(s.name)) {
      if (brand == "mcp" || brand == "server") continue;
      for (const auto& t : name_tokens)
        if (t == brand) return &s;
    }
  }
  return nullptr;
}

std::optional<KnownRegistry> KnownRegistry::load(
    const std::filesystem::path& file) {
  auto text = util::read_file(file);
  if (!text) return std::nullopt;
  Json j = Json::parse(*text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("servers"))
    return std::nullopt;
  return from_json(j);
}

KnownRegistry KnownRegistry::from_json(const Json& j) {
  KnownRegistry reg;
  if (!j.is_object() || !j.contains("servers") || !j["servers"].is_array())
    return reg;
  for (const auto& item : j["servers"]) {
    KnownServer s;
    s.name = item.value("name", "");
    s.vendor = item.value("vendor", "");
    if (item.contains("tools") && item["tools"].is_array())
      for (const auto& t : item["tools"])
        if (t.is_string()) s.tools.push_back(t.get<std::string>());
    if (!s.name.empty()) reg.servers.push_back(std::move(s));
  }
  return reg;
}

Json KnownRegistry::to_json() const {
  Json arr = Json::array();
  for (const auto& s : servers)
    arr.push_back(Json{
        {"name", s.name}, {"vendor", s.vendor}, {"tools", s.tools}});
  return Json{{"servers", arr}};
}

}  // namespace mcpforge::attack
