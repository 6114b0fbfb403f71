#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcpforge::trace {

using Json = nlohmann::json;

// Event kinds recorded by the simulated host. Judges are written against this
// vocabulary, so names are stable identifiers.
namespace ev {
inline constexpr std::string_view kServerLaunched = "server-launched";
inline constexpr std::string_view kServerRefused = "server-refused";
inline constexpr std::string_view kServerConnected = "server-connected";
inline constexpr std::string_view kServerDistrusted = "server-distrusted";
inline constexpr std::string_view kRugPullWarning = "rug-pull-warning";
inline constexpr std::string_view kHandshakeCompleted = "handshake-completed";
inline constexpr std::string_view kHandshakeFailed = "handshake-failed";
inline constexpr std::string_view kUiInjection = "ui-injection";
inline constexpr std::string_view kAuthorizationAccepted =
    "authorization-endpoint-accepted";
inline constexpr std::string_view kAuthorizationRefused =
    "authorization-endpoint-refused";
inline constexpr std::string_view kUserQuery = "user-query";
inline constexpr std::string_view kResourceIncluded = "resource-included";
inline constexpr std::string_view kResourceReadFailed = "resource-read-failed";
inline constexpr std::string_view kBlobStored = "blob-stored";
inline constexpr std::string_view kPromptIncluded = "prompt-included";
inline constexpr std::string_view kPromptGetFailed = "prompt-get-failed";
inline constexpr std::string_view kCompletionRequest = "completion-request";
inline constexpr std::string_view kCompletionAccepted = "completion-accepted";
inline constexpr std::string_view kMessageToModel = "message-to-model";
inline constexpr std::string_view kToolCall = "tool-call";
inline constexpr std::string_view kToolDenied = "tool-denied";
inline constexpr std::string_view kToolResult = "tool-result";
inline constexpr std::string_view kFilteredContent = "filtered-content";
inline constexpr std::string_view kOutboundBlocked = "outbound-blocked";
inline constexpr std::string_view kElicitationRequest = "elicitation-request";
inline constexpr std::string_view kElicitationReply = "elicitation-reply";
inline constexpr std::string_view kSamplingRequest = "sampling-request";
inline constexpr std::string_view kSamplingReply = "sampling-reply";
inline constexpr std::string_view kSamplingDenied = "sampling-denied";
inline constexpr std::string_view kFinalAnswer = "final-answer";
inline constexpr std::string_view kBudgetStop = "budget-stop";
inline constexpr std::string_view kNote = "note";
}  // namespace ev

// One host-observed event. `seq` is a logical clock: transcripts carry no wall
// time so identical trials serialize byte-identically.
struct TraceEvent {
  std::uint64_t seq = 0;
  std::string kind;
  Json fields = Json::object();
};

class Transcript {
 public:
  std::uint64_t add(std::string_view kind, Json fields);

  const std::vector<TraceEvent>& events() const { return events_; }

  std::vector<const TraceEvent*> find(std::string_view kind) const;
  const TraceEvent* first(std::string_view kind) const;
  bool contains(std::string_view kind) const;

  // True if any event of `kind` has a string field `key` containing `needle`.
  bool any_field_contains(std::string_view kind, std::string_view key,
                          std::string_view needle) const;

  Json to_json() const;
  static Transcript from_json(const Json& j);
  void save(const std::filesystem::path& path) const;
  static Transcript load(const std::filesystem::path& path);

 private:
  std::uint64_t next_seq_ = 1;
  std::vector<TraceEvent> events_;
};

// Per-server connection summary at end of trial.
struct ServerConnSummary {
  std::string transport;          // "stdio" | "http"
  std::string conn_state;         // running | closed | failed
  std::string fail_reason;        // none | flood | io
  std::string flood_detail;       // none | oversize-line | ...
  std::string handshake;          // ok | failed | flood | refused | not-run
  std::size_t peak_buffered_bytes = 0;
  std::size_t peak_inbox_depth = 0;
  std::size_t notifications_in = 0;
  std::size_t decode_errors = 0;
};

// End-of-trial host facts judges may consult alongside the transcript.
struct HostState {
  bool survived = true;
  std::map<std::string, ServerConnSummary> servers;

  bool any_connection_flood_failed() const;
  bool any_handshake_completed() const;

  Json to_json() const;
  static HostState from_json(const Json& j);
};

}  // namespace mcpforge::trace
