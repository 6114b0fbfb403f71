#pragma once

#include <memory>
#include <string>

#include "mcpforge/sink/store.hpp"

namespace mcpforge::sink {

// Loopback HTTP capture endpoint standing in for attacker infrastructure.
//   POST /record   headers X-Mcpforge-Trial / X-Mcpforge-Tag /
//                  X-Mcpforge-Source, body = captured bytes -> 204
//   GET  /records?trial=...&tag=...  -> JSON array of records
//   GET  /healthz -> 200 "ok"
// Refuses to bind non-loopback addresses unless MCPFORGE_ALLOW_NONLOCAL_SINK=1.
class SinkServer {
 public:
  SinkServer();
  ~SinkServer();
  SinkServer(const SinkServer&) = delete;
  SinkServer& operator=(const SinkServer&) = delete;

  // Binds and serves in a background thread; port 0 picks a free port.
  // Throws on bind failure or non-loopback host without the override.
  void start(const std::string& host, int port,
             const std::filesystem::path& store_path);
  void stop();

  bool running() const;
  int port() const;
  std::string url() const;  // http://host:port
  RecordStore& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool is_loopback_host(const std::string& host);

}  // namespace mcpforge::sink
