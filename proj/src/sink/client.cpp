#include "mcpforge/sink/client.hpp"

#include <httplib.h>

#include <cstdlib>

#include "mcpforge/sink/server.hpp"

namespace mcpforge::sink {
namespace {

bool parse_http_base(const std::string& url, std::string& host, int& port) {
  const std::string prefix = "http://";
  if (url.rfind(prefix, 0) != 0) return false;
  std::string rest = url.substr(prefix.size());
  auto slash = rest.find('/');
  if (slash != std::string::npos) rest = rest.substr(0, slash);
  auto colon = rest.rfind(':');
  if (colon == std::string::npos || colon == 0) return false;
  host = rest.substr(0, colon);
  try {
    port = std::stoi(rest.substr(colon + 1));
  } catch (...) {
    return false;
  }
  return port > 0 && port < 65536;
}

}  // namespace

SinkClient::SinkClient(std::string base_url) : base_url_(std::move(base_url)) {
  if (!parse_http_base(base_url_, host_, port_)) {
    refusal_ = "unparseable sink url: " + base_url_;
    return;
  }
  const char* allow = std::getenv("MCPFORGE_ALLOW_NONLOCAL_SINK");
  if (!is_loopback_host(host_) && (!allow || std::string(allow) != "1")) {
    refusal_ = "refusing non-loopback sink host: " + host_;
    return;
  }
  usable_ = true;
}

bool SinkClient::post(const std::string& trial_id, const std::string& tag,
                      const std::string& source, const std::string& body) {
  if (!usable_) return false;
  httplib::Client cli(host_, port_);
  cli.set_connection_timeout(2, 0);
  cli.set_read_timeout(5, 0);
  cli.set_write_timeout(5, 0);
  httplib::Headers headers = {{"X-Mcpforge-Trial", trial_id},
                              {"X-Mcpforge-Tag", tag},
                              {"X-Mcpforge-Source", source}};
  auto res = cli.Post("/record", headers, body, "application/octet-stream");
  return res && res->status == 204;
}

std::optional<std::vector<SinkRecord>> SinkClient::query(
    const std::string& trial_id, const std::string& tag_prefix) {
  if (!usable_) return std::nullopt;
  httplib::Client cli(host_, port_);
  cli.set_connection_timeout(2, 0);
  cli.set_read_timeout(5, 0);
  httplib::Params params;
  if (!trial_id.empty()) params.emplace("trial", trial_id);
  if (!tag_prefix.empty()) params.emplace("tag", tag_prefix);
  auto res = cli.Get("/records", params, httplib::Headers{});
  if (!res || res->status != 200) return std::nullopt;
  Json parsed = Json::parse(res->body, nullptr, false);
  if (!parsed.is_array()) return std::nullopt;
  std::vector<SinkRecord> out;
  out.reserve(parsed.size());
  for (const auto& item : parsed) {
    if (!item.is_object()) continue;
    out.push_back(SinkRecord::from_json(item));
  }
  return out;
}

bool SinkClient::healthy() {
  if (!usable_) return false;
  httplib::Client cli(host_, port_);
  cli.set_connection_timeout(2, 0);
  cli.set_read_timeout(2, 0);
  auto res = cli.Get("/healthz");
  return res && res->status == 200;
}

}  // namespace mcpforge::sink
