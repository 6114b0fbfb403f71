#include "mcpforge/rpc/method.hpp"

#include <array>
#include <utility>

namespace mcpforge::rpc {

namespace {
constexpr std::array<std::pair<Method, std::string_view>, 16> kMethodNames = {{
    {Method::kInitialize, "initialize"},
    {Method::kPing, "ping"},
    {Method::kToolsList, "tools/list"},
    {Method::kToolsCall, "tools/call"},
    {Method::kResourcesList, "resources/list"},
    {Method::kResourcesRead, "resources/read"},
    {Method::kPromptsList, "prompts/list"},
    {Method::kPromptsGet, "prompts/get"},
    {Method::kCompletionComplete, "completion/complete"},
    {Method::kSamplingCreateMessage, "sampling/createMessage"},
    {Method::kElicitationCreate, "elicitation/create"},
    {Method::kNotificationMessage, "notifications/message"},
    {Method::kNotificationProgress, "notifications/progress"},
    {Method::kNotificationToolsListChanged, "notifications/tools/list_changed"},
    {Method::kNotificationResourcesListChanged,
     "notifications/resources/list_changed"},
    {Method::kNotificationPromptsListChanged,
     "notifications/prompts/list_changed"},
}};
}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [method, method_str] : kMethodNames)
    if (method_str == name) return method;
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> v;
    for (const auto& [method, name] : kMethodNames) v.push_back(method);
    return v;
  }();
  return methods;
}

bool is_notification_method(Method m) {
  switch (m) {
    case Method::kNotificationMessage:
    case Method::kNotificationProgress:
    case Method::kNotificationToolsListChanged:
    case Method::kNotificationResourcesListChanged:
    case Method::kNotificationPromptsListChanged:
      return true;
    default:
      return false;
  }
}

bool is_server_to_client_request(Method m) {
  return m == Method::kSamplingCreateMessage ||
         m == Method::kElicitationCreate;
}

}  // namespace mcpforge::rpc
