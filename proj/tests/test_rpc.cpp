#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "mcpforge/rpc/codec.hpp"
#include "mcpforge/rpc/message.hpp"
#include "mcpforge/rpc/method.hpp"

using namespace mcpforge;
using rpc::RpcMessage;

TEST_CASE("wire keys are bit-exact") {
  auto req = rpc::make_request(std::int64_t{7}, "tools/list", rpc::Json::object());
  CHECK(rpc::encode_line(req) ==
        R"({"id":7,"jsonrpc":"2.0","method":"tools/list","params":{}})");

  auto note = rpc::make_notification("notifications/message",
                                     rpc::Json{{"level", "info"}});
  CHECK(rpc::encode_line(note) ==
        R"({"jsonrpc":"2.0","method":"notifications/message","params":{"level":"info"}})");

  auto res = rpc::make_result(std::int64_t{7}, rpc::Json{{"tools", rpc::Json::array()}});
  CHECK(rpc::encode_line(res) ==
        R"({"id":7,"jsonrpc":"2.0","result":{"tools":[]}})");

  auto err = rpc::make_error(std::string("abc"), rpc::kMethodNotFound,
                             "method not found");
  CHECK(rpc::encode_line(err) ==
        R"({"error":{"code":-32601,"message":"method not found"},"id":"abc","jsonrpc":"2.0"})");
}

TEST_CASE("error code constants") {
  CHECK(rpc::kParseError == -32700);
  CHECK(rpc::kInvalidRequest == -32600);
  CHECK(rpc::kMethodNotFound == -32601);
  CHECK(rpc::kInvalidParams == -32602);
  CHECK(rpc::kInternalError == -32603);
  CHECK(rpc::kInteractionTimeout == -32001);
}

TEST_CASE("protocol version and method table") {
  CHECK(std::string(rpc::kProtocolVersion) == "2025-06-18");
  CHECK(rpc::parse_method("tools/call").has_value());
  CHECK(rpc::parse_method("nope/nope") == std::nullopt);
  for (auto m : rpc::all_methods())
    CHECK(rpc::parse_method(rpc::method_name(m)) == m);
  CHECK(rpc::is_notification_method(*rpc::parse_method("notifications/message")));
  CHECK(rpc::is_server_to_client_request(
      *rpc::parse_method("sampling/createMessage")));
  CHECK(rpc::is_server_to_client_request(
      *rpc::parse_method("elicitation/create")));
  CHECK_FALSE(rpc::is_server_to_client_request(*rpc::parse_method("tools/call")));
}

namespace {

// Deterministic generator covering every message shape the dialect allows.
RpcMessage random_message(std::mt19937& rng) {
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  auto random_id = [&]() -> rpc::RpcId {
    if (pick(2) == 0)
      return static_cast<std::int64_t>(
          std::uniform_int_distribution<std::int64_t>(-1000000, 1000000)(rng));
    std::string s = "id-";
    for (int i = 0; i < 6; ++i) s += static_cast<char>('a' + pick(26));
    return s;
  };
  auto random_json = [&](int depth) {
    // Small recursive JSON values with strings that stress escaping.
    std::function<rpc::Json(int)> gen = [&](int d) -> rpc::Json {
      switch (pick(d > 0 ? 6 : 4)) {
        case 0: return rpc::Json(static_cast<std::int64_t>(pick(10000)));
        case 1: return rpc::Json("text \"quoted\" and \\slashed\\ \n tab\t");
        case 2: return rpc::Json(pick(2) == 0);
        case 3: return rpc::Json(nullptr);
        case 4: {
          rpc::Json arr = rpc::Json::array();
          const auto n = pick(3);
          for (std::size_t i = 0; i < n; ++i) arr.push_back(gen(d - 1));
          return arr;
        }
        default: {
          rpc::Json obj = rpc::Json::object();
          const auto n = pick(3);
          for (std::size_t i = 0; i < n; ++i)
            obj["k" + std::to_string(i)] = gen(d - 1);
          return obj;
        }
      }
    };
    return gen(depth);
  };

  const auto methods = rpc::all_methods();
  switch (pick(4)) {
    case 0: {
      auto m = rpc::make_request(random_id(),
                                 std::string(rpc::method_name(methods[pick(methods.size())])));
      if (pick(2) == 0) m.params = rpc::Json::object();
      if (m.params && pick(2) == 0) (*m.params)["payload"] = random_json(2);
      return m;
    }
    case 1: {
      rpc::Json params = rpc::Json::object();
      params["data"] = random_json(2);
      return rpc::make_notification(
          std::string(rpc::method_name(methods[pick(methods.size())])), params);
    }
    case 2:
      return rpc::make_result(random_id(), random_json(3));
    default: {
      auto m = rpc::make_error(random_id(),
                               -32700 + static_cast<std::int64_t>(pick(200)),
                               "err \"msg\" with \\ escapes");
      if (pick(2) == 0) m.error->data = random_json(2);
      return m;
    }
  }
}

}  // namespace

TEST_CASE("1000-message encode/decode round-trip is lossless") {
  std::mt19937 rng(20250614u);
  for (int i = 0; i < 1000; ++i) {
    const auto msg = random_message(rng);
    const auto line = rpc::encode_line(msg);
    CHECK(line.find('\n') == std::string::npos);
    auto out = rpc::decode_line(line);
    REQUIRE(rpc::decode_ok(out));
    const auto& back = rpc::decoded(out);
    CHECK(back == msg);
    // Second pass: re-encoding the decoded message is byte-stable.
    CHECK(rpc::encode_line(back) == line);
  }
}

TEST_CASE("adversarial decode corpus never throws and labels failures") {
  using Code = rpc::DecodeFailure::Code;
  struct Case {
    const char* line;
    Code expect;
  };
  const Case cases[] = {
      {"", Code::kParseError},
      {"not json at all", Code::kParseError},
      {"{", Code::kParseError},
      {"[1,2,3]", Code::kInvalidMessage},            // not an object
      {"42", Code::kInvalidMessage},                 // not an object
      {"\"str\"", Code::kInvalidMessage},
      {"null", Code::kInvalidMessage},
      {R"({"method":"ping"})", Code::kInvalidMessage},  // missing jsonrpc
      {R"({"jsonrpc":"1.0","method":"ping"})", Code::kInvalidMessage},
      {R"({"jsonrpc":2.0,"method":"ping"})", Code::kInvalidMessage},
      {R"({"jsonrpc":"2.0"})", Code::kInvalidMessage},  // no method, no id
      {R"({"jsonrpc":"2.0","id":1})", Code::kInvalidMessage},  // no result/error
      {R"({"jsonrpc":"2.0","id":1,"result":1,"error":{"code":1,"message":"x"}})",
       Code::kInvalidMessage},  // both result and error
      {R"({"jsonrpc":"2.0","id":1,"error":{"message":"x"}})",
       Code::kInvalidMessage},  // error without code
      {R"({"jsonrpc":"2.0","id":1,"error":{"code":"x","message":"y"}})",
       Code::kInvalidMessage},  // non-integer code
      {R"({"jsonrpc":"2.0","id":{"k":1},"method":"ping"})",
       Code::kInvalidMessage},  // object id
      {R"({"jsonrpc":"2.0","id":1.5,"method":"ping"})",
       Code::kInvalidMessage},  // fractional id
      {R"({"jsonrpc":"2.0","method":"ping","params":[1,2]})",
       Code::kInvalidMessage},  // params must be an object
      {R"({"jsonrpc":"2.0","method":7})", Code::kInvalidMessage},
      {R"({"jsonrpc":"2.0","method":"ping","result":{}})",
       Code::kInvalidMessage},  // method and result together
  };
  for (const auto& c : cases) {
    auto out = rpc::decode_line(c.line);
    REQUIRE_FALSE(rpc::decode_ok(out));
    CHECK(rpc::decode_failure(out).code == c.expect);
  }
}

TEST_CASE("oversize lines are rejected before parsing") {
  std::string big = R"({"jsonrpc":"2.0","method":"ping","params":{"pad":")";
  big += std::string(1024, 'x');
  big += "\"}}";
  auto out = rpc::decode_line(big, /*max_line_bytes=*/256);
  REQUIRE_FALSE(rpc::decode_ok(out));
  CHECK(rpc::decode_failure(out).code == rpc::DecodeFailure::Code::kOversize);
  // The same line passes under the default 4 MiB limit.
  CHECK(rpc::decode_ok(rpc::decode_line(big)));
}

TEST_CASE("unknown methods decode fine (dispatch rejects them later)") {
  auto out = rpc::decode_line(R"({"jsonrpc":"2.0","id":9,"method":"exotic/x"})");
  REQUIRE(rpc::decode_ok(out));
  CHECK(rpc::decoded(out).method == "exotic/x");
}

TEST_CASE("null params are tolerated and normalized away") {
  auto out = rpc::decode_line(R"({"jsonrpc":"2.0","id":1,"method":"ping","params":null})");
  REQUIRE(rpc::decode_ok(out));
  CHECK_FALSE(rpc::decoded(out).params.has_value());
}
