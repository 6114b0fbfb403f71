// HTTP client for the capture sink.  Malicious server effects use this to
// post harvested bytes; the judge and tests use it to query what arrived.
//
// Loopback discipline mirrors the server: the client refuses to post to a
// non-loopback sink URL unless MCPFORGE_ALLOW_NONLOCAL_SINK=1, so a
// misconfigured manifest cannot turn the testbed into a real exfiltration
// tool.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcpforge/sink/record.hpp"

namespace mcpforge::sink {

class SinkClient {
 public:
  // `base_url` as produced by SinkServer::url(), e.g. "http://127.0.0.1:9321".
  explicit SinkClient(std::string base_url);

  // True when the URL parsed as http://host:port and the host is loopback
  // (or the env override is set).  A refused client never sends anything.
  bool usable() const { return usable_; }
  const std::string& refusal() const { return refusal_; }

  // POST one record.  Returns false on refusal or transport failure; the
  // sink is best-effort from the attacker side and callers do not retry.
  bool post(const std::string& trial_id, const std::string& tag,
            const std::string& source, const std::string& body);

  // GET /records with optional trial / tag-prefix filters.
  std::optional<std::vector<SinkRecord>> query(const std::string& trial_id,
                                               const std::string& tag_prefix);

  bool healthy();

 private:
  std::string base_url_;
  std::string host_;
  int port_ = 0;
  bool usable_ = false;
  std::string refusal_;
};

}  // namespace mcpforge::sink
