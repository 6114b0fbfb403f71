#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcpforge::rpc {

// The protocol dialect's closed method set. Unknown method strings are still
// carried verbatim by the codec; this enum exists for dispatch and validation.
enum class Method {
  kInitialize,
  kPing,
  kToolsList,
  kToolsCall,
  kResourcesList,
  kResourcesRead,
  kPromptsList,
  kPromptsGet,
  kCompletionComplete,
  kSamplingCreateMessage,   // server -> client
  kElicitationCreate,       // server -> client
  kNotificationMessage,
  kNotificationProgress,
  kNotificationToolsListChanged,
  kNotificationResourcesListChanged,
  kNotificationPromptsListChanged,
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();
bool is_notification_method(Method m);
bool is_server_to_client_request(Method m);

inline constexpr std::string_view kProtocolVersion = "2025-06-18";

}  // namespace mcpforge::rpc
