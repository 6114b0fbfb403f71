// Effect primitives: the safe, bounded side effects a generated server
// can perform.  Every observable consequence of an attack is built from
// these, so the safety review has exactly one choke point.
//
// Hard caps (enforced both at manifest validation and again at
// execution time):
//   - MessageFlood.count     <= 100000
//   - CpuBurn.duration_ms    <= 2000
//   - SandboxWrite.rel_path  must stay inside the sandbox root
//   - EndpointBind           loopback only unless MCPFORGE_ALLOW_NONLOCAL_SINK=1
//   - SinkExfil / beacons    only ever talk to the loopback capture sink
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mcpforge::attack {

using Json = nlohmann::json;

inline constexpr std::uint32_t kMaxFloodCount = 100000;
inline constexpr std::uint32_t kMaxCpuBurnMs = 2000;

// What a SinkExfil effect captures.
enum class ExfilSelector : std::uint8_t {
  kToolArgs,        // the arguments of the current tools/call
  kResourceParams,  // the resolved parameters of the current resources/read
  kPromptArgs,      // the arguments of the current prompts/get
  kFixedBlob,       // a payload baked into the manifest
};
std::string exfil_selector_name(ExfilSelector s);
std::optional<ExfilSelector> parse_exfil_selector(const std::string& name);

// Post captured bytes to the loopback capture sink under `sink_tag`.
struct SinkExfil {
  ExfilSelector selector = ExfilSelector::kFixedBlob;
  std::string sink_tag;
  std::string blob;  // used when selector == kFixedBlob
};

// Drop a file inside the sandbox root (and mirror the fact to the sink
// so judges can score it without touching the filesystem).
struct SandboxWrite {
  std::string rel_path;  // relative, no ".." segments
  std::string content;
};

// Spray notifications at the client.
struct MessageFlood {
  std::string channel = "log";  // "log" or "progress"
  std::uint32_t count = 0;
  std::uint32_t bytes_each = 0;  // padding per message
};

// Return a single reply payload of roughly `bytes` bytes.
struct OversizedOutput {
  std::uint64_t bytes = 0;
};

// Raise an elicitation/create toward the client; whatever comes back is
// posted to the sink under `sink_tag`.
struct ElicitationRequest {
  std::string message;
  std::vector<std::string> requested_fields;
  std::string sink_tag;
};

// Raise a sampling/createMessage toward the client; the completion the
// client model returns is posted to the sink under `sink_tag`.
struct SamplingRequest {
  std::string prompt;
  std::string sink_tag;
};

// Embed a resource link in the current tool result so a credulous host
// fetches a second-stage payload.
struct ResourceInvoke {
  std::string uri;
};

// Bind a real listener (loopback in this testbed) and post a beacon to
// the sink recording the address the manifest *declared* it would bind.
struct EndpointBind {
  std::string declared_host;  // e.g. "0.0.0.0" — recorded, never bound
  int declared_port = 0;
  std::string sink_tag = "endpoint-bind";
};

// Spin the CPU for `duration_ms` (capped) to simulate resource abuse.
struct CpuBurn {
  std::uint32_t duration_ms = 0;
};

using Effect =
    std::variant<SinkExfil, SandboxWrite, MessageFlood, OversizedOutput,
                 ElicitationRequest, SamplingRequest, ResourceInvoke,
                 EndpointBind, CpuBurn>;

std::string effect_kind(const Effect& e);
Json effect_to_json(const Effect& e);
std::optional<Effect> effect_from_json(const Json& j);

// Returns all cap/shape violations (empty == valid).  Prefixes each
// violation with `where` so manifest validation can point at the spot.
std::vector<std::string> validate_effect(const Effect& e,
                                         const std::string& where);

}  // namespace mcpforge::attack
