#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

namespace mcpforge::sink {

using Json = nlohmann::json;

// One captured exfiltration/beacon. The sink stands in for attacker-controlled
// infrastructure; records never contain real user data, only planted markers.
struct SinkRecord {
  std::uint64_t seq = 0;        // arrival order, monotone per store
  std::uint64_t arrival_ns = 0; // steady-clock arrival (diagnostic only)
  std::string trial_id;
  std::string tag;
  std::string source;           // free-form origin hint (server/component)
  std::string body;             // raw bytes

  Json to_json() const;
  static SinkRecord from_json(const Json& j);
};

}  // namespace mcpforge::sink
