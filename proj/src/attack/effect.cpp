#include "mcpforge/attack/effect.hpp"

#include <filesystem>

namespace mcpforge::attack {
namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

bool sandbox_safe_rel_path(const std::string& rel) {
  if (rel.empty()) return false;
  std::filesystem::path p(rel);
  if (p.is_absolute()) return false;
  for (const auto& part : p)
    if (part == "..") return false;
  return true;
}

}  // namespace

std::string exfil_selector_name(ExfilSelector s) {
  switch (s) {
    case ExfilSelector::kToolArgs: return "tool-args";
    case ExfilSelector::kResourceParams: return "resource-params";
    case ExfilSelector::kPromptArgs: return "prompt-args";
    case ExfilSelector::kFixedBlob: return "fixed-blob";
  }
  return "?";
}

std::optional<ExfilSelector> parse_exfil_selector(const std::string& name) {
  if (name == "tool-args") return ExfilSelector::kToolArgs;
  if (name == "resource-params") return ExfilSelector::kResourceParams;
  if (name == "prompt-args") return ExfilSelector::kPromptArgs;
  if (name == "fixed-blob") return ExfilSelector::kFixedBlob;
  return std::nullopt;
}

std::string effect_kind(const Effect& e) {
  return std::visit(
      Overload{
          [](const SinkExfil&) { return std::string("sink-exfil"); },
          [](const SandboxWrite&) { return std::string("sandbox-write"); },
          [](const MessageFlood&) { return std::string("message-flood"); },
          [](const OversizedOutput&) {
            return std::string("oversized-output");
          },
          [](const ElicitationRequest&) {
            return std::string("elicitation-request");
          },
          [](const SamplingRequest&) {
            return std::string("sampling-request");
          },
          [](const ResourceInvoke&) {
            return std::string("resource-invoke");
          },
          [](const EndpointBind&) { return std::string("endpoint-bind"); },
          [](const CpuBurn&) { return std::string("cpu-burn"); },
      },
      e);
}

Json effect_to_json(const Effect& e) {
  Json j{{"kind", effect_kind(e)}};
  std::visit(
      Overload{
          [&](const SinkExfil& x) {
            j["selector"] = exfil_selector_name(x.selector);
            j["sink_tag"] = x.sink_tag;
            if (!x.blob.empty()) j["blob"] = x.blob;
          },
          [&](const SandboxWrite& x) {
            j["rel_path"] = x.rel_path;
            j["content"] = x.content;
          },
          [&](const MessageFlood& x) {
            j["channel"] = x.channel;
            j["count"] = x.count;
            j["bytes_each"] = x.bytes_each;
          },
          [&](const OversizedOutput& x) { j["bytes"] = x.bytes; },
          [&](const ElicitationRequest& x) {
            j["message"] = x.message;
            j["requested_fields"] = x.requested_fields;
            j["sink_tag"] = x.sink_tag;
          },
          [&](const SamplingRequest& x) {
            j["prompt"] = x.prompt;
            j["sink_tag"] = x.sink_tag;
          },
          [&](const ResourceInvoke& x) { j["uri"] = x.uri; },
          [&](const EndpointBind& x) {
            j["declared_host"] = x.declared_host;
            j["declared_port"] = x.declared_port;
            j["sink_tag"] = x.sink_tag;
          },
          [&](const CpuBurn& x) { j["duration_ms"] = x.duration_ms; },
      },
      e);
  return j;
}

std::optional<Effect> effect_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    return std::nullopt;
  const std::string kind = j["kind"].get<std::string>();
  auto str = [&j](const char* key) { return j.value(key, std::string()); };

  if (kind == "sink-exfil") {
    SinkExfil x;
    auto sel = parse_exfil_selector(str("selector"));
    if (!sel) return std::nullopt;
    x.selector = *sel;
    x.sink_tag = str("sink_tag");
    x.blob = str("blob");
    return Effect{x};
  }
  if (kind == "sandbox-write") {
    SandboxWrite x;
    x.rel_path = str("rel_path");
    x.content = str("content");
    return Effect{x};
  }
  if (kind == "message-flood") {
    MessageFlood x;
    x.channel = j.value("channel", "log");
    if (!j.contains("count") || !j["count"].is_number_unsigned())
      return std::nullopt;
    x.count = j["count"].get<std::uint32_t>();
    x.bytes_each = j.value("bytes_each", 0u);
    return Effect{x};
  }
  if (kind == "oversized-output") {
    OversizedOutput x;
    if (!j.contains("bytes") || !j["bytes"].is_number_unsigned())
      return std::nullopt;
    x.bytes = j["bytes"].get<std::uint64_t>();
    return Effect{x};
  }
  if (kind == "elicitation-request") {
    ElicitationRequest x;
    x.message = str("message");
    x.sink_tag = str("sink_tag");
    if (j.contains("requested_fields")) {
      if (!j["requested_fields"].is_array()) return std::nullopt;
      for (const auto& f : j["requested_fields"]) {
        if (!f.is_string()) return std::nullopt;
        x.requested_fields.push_back(f.get<std::string>());
      }
    }
    return Effect{x};
  }
  if (kind == "sampling-request") {
    SamplingRequest x;
    x.prompt = str("prompt");
    x.sink_tag = str("sink_tag");
    return Effect{x};
  }
  if (kind == "resource-invoke") {
    ResourceInvoke x;
    x.uri = str("uri");
    return Effect{x};
  }
  if (kind == "endpoint-bind") {
    EndpointBind x;
    x.declared_host = str("declared_host");
    x.declared_port = j.value("declared_port", 0);
    x.sink_tag = j.value("sink_tag", std::string("endpoint-bind"));
    return Effect{x};
  }
  if (kind == "cpu-burn") {
    CpuBurn x;
    if (!j.contains("duration_ms") || !j["duration_ms"].is_number_unsigned())
      return std::nullopt;
    x.duration_ms = j["duration_ms"].get<std::uint32_t>();
    return Effect{x};
  }
  return std::nullopt;
}

std::vector<std::string> validate_effect(const Effect& e,
                                         const std::string& where) {
  std::vector<std::string> out;
  auto bad = [&](const std::string& msg) { out.push_back(where + ": " + msg); };
  std::visit(
      Overload{
          [&](const SinkExfil& x) {
            if (x.sink_tag.empty()) bad("sink-exfil needs a sink_tag");
            if (x.selector == ExfilSelector::kFixedBlob && x.blob.empty())
              bad("fixed-blob exfil needs a blob");
          },
          [&](const SandboxWrite& x) {
            if (!sandbox_safe_rel_path(x.rel_path))
              bad("sandbox-write path must be relative and stay inside the "
                  "sandbox: '" +
                  x.rel_path + "'");
          },
          [&](const MessageFlood& x) {
            if (x.count == 0) bad("message-flood count must be positive");
            if (x.count > kMaxFloodCount)
              bad("message-flood count " + std::to_string(x.count) +
                  " exceeds cap " + std::to_string(kMaxFloodCount));
            if (x.channel != "log" && x.channel != "progress")
              bad("message-flood channel must be 'log' or 'progress'");
          },
          [&](const OversizedOutput& x) {
            if (x.bytes == 0) bad("oversized-output bytes must be positive");
            if (x.bytes > (64ull << 20))
              bad("oversized-output capped at 64 MiB");
          },
          [&](const ElicitationRequest& x) {
            if (x.message.empty()) bad("elicitation needs a message");
            if (x.sink_tag.empty()) bad("elicitation needs a sink_tag");
          },
          [&](const SamplingRequest& x) {
            if (x.prompt.empty()) bad("sampling needs a prompt");
            if (x.sink_tag.empty()) bad("sampling needs a sink_tag");
          },
          [&](const ResourceInvoke& x) {
            if (x.uri.empty()) bad("resource-invoke needs a uri");
          },
          [&](const EndpointBind& x) {
            if (x.declared_host.empty())
              bad("endpoint-bind needs a declared_host");
            if (x.declared_port <= 0 || x.declared_port > 65535)
              bad("endpoint-bind declared_port out of range");
          },
          [&](const CpuBurn& x) {
            if (x.duration_ms == 0) bad("cpu-burn duration must be positive");
            if (x.duration_ms > kMaxCpuBurnMs)
              bad("cpu-burn duration " + std::to_string(x.duration_ms) +
                  "ms exceeds cap " + std::to_string(kMaxCpuBurnMs) + "ms");
          },
      },
      e);
  return out;
}

}  // namespace mcpforge::attack
