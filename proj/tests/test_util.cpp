#include <doctest.h>

#include <filesystem>
#include <set>

#include "mcpforge/util/fs.hpp"
#include "mcpforge/util/text.hpp"

using namespace mcpforge;

TEST_CASE("to_lower and contains_ci") {
  CHECK(util::to_lower("PayPal-MCP") == "paypal-mcp");
  CHECK(util::contains_ci("The OFFICIAL server", "official"));
  CHECK(util::contains_ci("abc", ""));
  CHECK_FALSE(util::contains_ci("abc", "abcd"));
  CHECK_FALSE(util::contains_ci("", "x"));
}

TEST_CASE("tokenize splits on non-alphanumerics and lowercases") {
  auto toks = util::tokenize("Send $25 to bob@example.test, NOW!");
  CHECK(toks == std::vector<std::string>{"send", "25", "to", "bob", "example",
                                         "test", "now"});
  CHECK(util::tokenize("").empty());
  CHECK(util::tokenize("---").empty());
}

TEST_CASE("content_tokens drops stopwords") {
  auto toks = util::content_tokens("the best tool for the currency rates");
  std::set<std::string> set(toks.begin(), toks.end());
  CHECK(set.count("best") == 1);
  CHECK(set.count("currency") == 1);
  CHECK(set.count("rates") == 1);
  CHECK(set.count("the") == 0);
  CHECK(set.count("for") == 0);
}

TEST_CASE("edit_distance classic pins") {
  CHECK(util::edit_distance("kitten", "sitting") == 3);
  CHECK(util::edit_distance("", "abc") == 3);
  CHECK(util::edit_distance("abc", "") == 3);
  CHECK(util::edit_distance("same", "same") == 0);
  CHECK(util::edit_distance("flaw", "lawn") == 2);
  // The canonical typosquat pair used across the corpus.
  CHECK(util::edit_distance("wikipedia.org", "wikipeda.org") == 1);
}

TEST_CASE("token_overlap uses set semantics") {
  std::vector<std::string> a{"alpha", "beta", "beta", "gamma"};
  std::vector<std::string> b{"beta", "gamma", "delta"};
  CHECK(util::token_overlap(a, b) == 2);
  CHECK(util::token_overlap(a, {}) == 0);
}

TEST_CASE("fnv1a_hex matches the published offset basis for empty input") {
  // FNV-1a 64-bit offset basis is 14695981039346656037 == 0xcbf29ce484222325.
  CHECK(util::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(util::fnv1a_hex("a") != util::fnv1a_hex("b"));
  CHECK(util::fnv1a_hex("stable") == util::fnv1a_hex("stable"));
  CHECK(util::fnv1a_hex("x").size() == 16);
}

TEST_CASE("join and starts_with") {
  CHECK(util::join({"a", "b", "c"}, " ") == "a b c");
  CHECK(util::join({}, ",").empty());
  CHECK(util::starts_with("init-exfil", "init-"));
  CHECK_FALSE(util::starts_with("init", "init-"));
}

TEST_CASE("base64 RFC 4648 vectors") {
  CHECK(util::base64_encode("") == "");
  CHECK(util::base64_encode("f") == "Zg==");
  CHECK(util::base64_encode("fo") == "Zm8=");
  CHECK(util::base64_encode("foo") == "Zm9v");
  CHECK(util::base64_encode("foob") == "Zm9vYg==");
  CHECK(util::base64_encode("fooba") == "Zm9vYmE=");
  CHECK(util::base64_encode("foobar") == "Zm9vYmFy");

  CHECK(util::base64_decode("Zm9vYmFy") == std::string("foobar"));
  CHECK(util::base64_decode("Zg==") == std::string("f"));
  CHECK(util::base64_decode("") == std::string(""));

  CHECK_FALSE(util::base64_decode("Zg="));      // bad padding length
  CHECK_FALSE(util::base64_decode("Z!g="));     // bad alphabet
  CHECK_FALSE(util::base64_decode("Zg===="));   // over-padded

  // Binary round-trip including NUL bytes.
  std::string blob("\x00\x7f\x80\xff\x01", 5);
  CHECK(util::base64_decode(util::base64_encode(blob)) == blob);
}

TEST_CASE("fs helpers: atomic write, read back, temp dirs") {
  auto dir = util::make_temp_dir("mcpforge-testutil");
  auto file = dir / "nested" / "out.txt";
  util::ensure_dir(file.parent_path());
  util::write_file_atomic(file, "hello\n");
  auto back = util::read_file(file);
  REQUIRE(back.has_value());
  CHECK(*back == "hello\n");
  CHECK_FALSE(util::read_file(dir / "missing.txt").has_value());
  // No stray .tmp siblings left behind.
  std::size_t entries = 0;
  for (auto& e : std::filesystem::directory_iterator(file.parent_path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("self_exe_path points at this test binary") {
  auto p = util::self_exe_path();
  CHECK(std::filesystem::exists(p));
  CHECK(p.filename().string().find("mcpforge_tests") != std::string::npos);
}
