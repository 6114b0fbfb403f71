#include "mcpforge/sink/server.hpp"

#include <httplib.h>

#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace mcpforge::sink {

bool is_loopback_host(const std::string& host) {
  return host == "127.0.0.1" || host == "localhost" || host == "::1" ||
         host.rfind("127.", 0) == 0;
}

struct SinkServer::Impl {
  httplib::Server http;
  std::thread serve_thread;
  std::unique_ptr<RecordStore> store;
  std::string host;
  int port = 0;
  bool running = false;

  ~Impl() { shutdown(); }

  void shutdown() {
    if (running) {
      http.stop();
      running = false;
    }
    if (serve_thread.joinable()) serve_thread.join();
  }
};

SinkServer::SinkServer() : impl_(std::make_unique<Impl>()) {}
SinkServer::~SinkServer() { stop(); }

void SinkServer::start(const std::string& host, int port,
                       const std::filesystem::path& store_path) {
  const char* allow = std::getenv("MCPFORGE_ALLOW_NONLOCAL_SINK");
  if (!is_loopback_host(host) && (!allow || std::string(allow) != "1"))
    throw std::runtime_error(
        "sink refuses non-loopback bind address without "
        "MCPFORGE_ALLOW_NONLOCAL_SINK=1: " +
        host);

  impl_->store = std::make_unique<RecordStore>(store_path);
  impl_->host = host;

  impl_->http.Post("/record", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    const std::string trial = req.get_header_value("X-Mcpforge-Trial");
    const std::string tag = req.get_header_value("X-Mcpforge-Tag");
    const std::string source = req.get_header_value("X-Mcpforge-Source");
    impl_->store->append(trial, tag, source, req.body);
    res.status = 204;
  });

  impl_->http.Get("/records", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    const std::string trial = req.get_param_value("trial");
    const std::string tag = req.get_param_value("tag");
    Json out = Json::array();
    for (const auto& r : impl_->store->query(trial, tag))
      out.push_back(r.to_json());
    res.set_content(out.dump(), "application/json");
  });

  impl_->http.Get("/healthz", [](const httplib::Request&,
                                 httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  if (port == 0) {
    impl_->port = impl_->http.bind_to_any_port(host);
    if (impl_->port <= 0) throw std::runtime_error("sink cannot bind " + host);
  } else {
    if (!impl_->http.bind_to_port(host, port))
      throw std::runtime_error("sink cannot bind " + host + ":" +
                               std::to_string(port));
    impl_->port = port;
  }
  impl_->running = true;
  impl_->serve_thread =
      std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void SinkServer::stop() {
  if (impl_) impl_->shutdown();
}

bool SinkServer::running() const { return impl_ && impl_->running; }

int SinkServer::port() const { return impl_ ? impl_->port : 0; }

std::string SinkServer::url() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

RecordStore& SinkServer::store() {
  if (!impl_ || !impl_->store) throw std::runtime_error("sink not started");
  return *impl_->store;
}

}  // namespace mcpforge::sink
