#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "mcpforge/sink/client.hpp"
#include "mcpforge/sink/server.hpp"
#include "mcpforge/sink/store.hpp"
#include "mcpforge/util/fs.hpp"

using namespace mcpforge;

TEST_CASE("record store appends, queries, and survives reopen") {
  auto dir = util::make_temp_dir("mcpforge-sinkstore");
  auto path = dir / "records.mfsk";
  {
    sink::RecordStore store(path);
    store.append("trial-a", "init-exfil", "srv-1", "payload-1");
    store.append("trial-a", "tool-exec", "srv-1", "payload-2");
    store.append("trial-b", "init-exfil", "srv-2", std::string("\x00\xff bin", 6));
    CHECK(store.size() == 3);
    CHECK(store.query("trial-a", "").size() == 2);
    CHECK(store.query("trial-a", "init-").size() == 1);
    CHECK(store.query("", "init-").size() == 2);  // all trials
    CHECK(store.query("trial-b", "").at(0).body ==
          std::string("\x00\xff bin", 6));
  }
  {
    // Reopen: everything is still there, and appends continue.
    sink::RecordStore store(path);
    REQUIRE(store.size() == 3);
    CHECK(store.query("trial-a", "tool-").at(0).body == "payload-2");
    store.append("trial-c", "email", "srv-3", "payload-4");
    CHECK(store.size() == 4);
  }
  {
    sink::RecordStore store(path);
    CHECK(store.size() == 4);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("record store tolerates a truncated tail record") {
  auto dir = util::make_temp_dir("mcpforge-sinktrunc");
  auto path = dir / "records.mfsk";
  {
    sink::RecordStore store(path);
    store.append("t", "tag-1", "s", "one");
    store.append("t", "tag-2", "s", "two");
  }
  // Chop bytes off the end, simulating a crash mid-append.
  auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 5);
  {
    sink::RecordStore store(path);
    CHECK(store.size() == 1);
    CHECK(store.query("t", "tag-1").size() == 1);
    // The store stays usable for new appends after recovery.
    store.append("t", "tag-3", "s", "three");
    CHECK(store.size() == 2);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("sink server + client round-trip with trial isolation") {
  auto dir = util::make_temp_dir("mcpforge-sinksrv");
  sink::SinkServer server;
  server.start("127.0.0.1", 0, dir / "records.mfsk");
  REQUIRE(server.running());
  REQUIRE(server.port() > 0);

  sink::SinkClient client(server.url());
  REQUIRE(client.usable());
  CHECK(client.healthy());

  CHECK(client.post("trial-1", "elicitation", "evil-srv", "GOVID-4417-0099"));
  CHECK(client.post("trial-1", "tool-exec", "evil-srv", "dropped"));
  CHECK(client.post("trial-2", "elicitation", "evil-srv", "other-trial"));

  auto t1 = client.query("trial-1", "");
  REQUIRE(t1.has_value());
  CHECK(t1->size() == 2);
  auto t1_elic = client.query("trial-1", "elicit");
  REQUIRE(t1_elic.has_value());
  REQUIRE(t1_elic->size() == 1);
  CHECK(t1_elic->at(0).body == "GOVID-4417-0099");
  CHECK(t1_elic->at(0).source == "evil-srv");

  auto t2 = client.query("trial-2", "");
  REQUIRE(t2.has_value());
  CHECK(t2->size() == 1);

  server.stop();
  CHECK_FALSE(server.running());
  std::filesystem::remove_all(dir);
}

TEST_CASE("sink refuses to bind non-loopback addresses by default") {
  REQUIRE(std::getenv("MCPFORGE_ALLOW_NONLOCAL_SINK") == nullptr);
  auto dir = util::make_temp_dir("mcpforge-sinkbind");
  sink::SinkServer server;
  CHECK_THROWS(server.start("0.0.0.0", 0, dir / "r.mfsk"));
  CHECK_FALSE(server.running());
  std::filesystem::remove_all(dir);
}

TEST_CASE("sink client refuses non-loopback targets by default") {
  REQUIRE(std::getenv("MCPFORGE_ALLOW_NONLOCAL_SINK") == nullptr);
  sink::SinkClient client("http://198.51.100.7:9999");
  CHECK_FALSE(client.usable());
  CHECK(client.refusal().find("non-loopback") != std::string::npos);
  CHECK_FALSE(client.post("t", "tag", "s", "body"));
  CHECK_FALSE(client.query("t", "").has_value());

  sink::SinkClient garbage("not-a-url");
  CHECK_FALSE(garbage.usable());
}

TEST_CASE("loopback host detection") {
  CHECK(sink::is_loopback_host("127.0.0.1"));
  CHECK(sink::is_loopback_host("127.9.9.9"));
  CHECK(sink::is_loopback_host("localhost"));
  CHECK(sink::is_loopback_host("::1"));
  CHECK_FALSE(sink::is_loopback_host("0.0.0.0"));
  CHECK_FALSE(sink::is_loopback_host("10.0.0.1"));
  CHECK_FALSE(sink::is_loopback_host("example.test"));
}
