// Seed pool, counting, composition, and corpus generation.
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mcpforge/attack/seed_pool.hpp"
#include "mcpforge/gen/composer.hpp"
#include "mcpforge/gen/corpus.hpp"
#include "mcpforge/gen/counting.hpp"
#include "mcpforge/util/fs.hpp"

using namespace mcpforge;
namespace fs = std::filesystem;

namespace {

const attack::SeedPool& shipped_pool() {
  static const attack::SeedPool pool = [] {
    std::vector<std::string> errors;
    auto loaded = attack::SeedPool::load(
        fs::path(MCPFORGE_FIXTURES_DIR) / "pool", &errors);
    if (!loaded) {
      for (const auto& e : errors) MESSAGE(e);
      REQUIRE(loaded.has_value());
    }
    return *loaded;
  }();
  return pool;
}

std::string slurp(const fs::path& p) {
  auto text = util::read_file(p);
  REQUIRE(text.has_value());
  return *text;
}

// Every effect found anywhere in a manifest.
std::size_t total_effects(const server::ServerManifest& m) {
  std::size_t n = m.init_effects.size();
  for (const auto& t : m.tools) n += t.effects.size();
  for (const auto& r : m.resources) n += r.effects.size();
  for (const auto& p : m.prompts) n += p.effects.size();
  return n;
}

}  // namespace

TEST_CASE("shipped seed pool loads and matches the pinned shape") {
  const auto& pool = shipped_pool();
  CHECK(pool.validate().empty());

  const auto shape_violations = pool.validate_shipped_shape();
  for (const auto& v : shape_violations) MESSAGE(v);
  CHECK(shape_violations.empty());

  const auto counts = pool.counts();
  CHECK(counts.metadata == 3);
  CHECK(counts.launch == 5);
  CHECK(counts.init == 7);
  CHECK(counts.tools_malicious == 10);
  CHECK(counts.tools_benign == 30);
  CHECK(counts.resources_malicious == 10);
  CHECK(counts.resources_benign == 10);
  CHECK(counts.prompts_malicious == 5);
  CHECK(counts.prompts_benign == 5);

  SUBCASE("per-category seed allocation") {
    using attack::Category;
    CHECK(pool.seeds_of(Category::kServerMetadata).size() == 3);
    CHECK(pool.seeds_of(Category::kLaunchConfig).size() == 5);
    CHECK(pool.seeds_of(Category::kInitialization).size() == 7);
    CHECK(pool.seeds_of(Category::kToolMetadata).size() == 3);
    CHECK(pool.seeds_of(Category::kToolInvocation).size() == 4);
    CHECK(pool.seeds_of(Category::kToolOutput).size() == 3);
    CHECK(pool.seeds_of(Category::kResourceMetadata).size() == 3);
    CHECK(pool.seeds_of(Category::kResourceInvocation).size() == 3);
    CHECK(pool.seeds_of(Category::kResourceOutput).size() == 4);
    CHECK(pool.seeds_of(Category::kPromptMetadata).size() == 2);
    CHECK(pool.seeds_of(Category::kPromptInvocation).size() == 2);
    CHECK(pool.seeds_of(Category::kPromptOutput).size() == 1);
  }

  SUBCASE("benign seeds carry no effects anywhere") {
    for (const auto& s : pool.tools_benign) CHECK(s.tool.effects.empty());
    for (const auto& s : pool.resources_benign)
      CHECK(s.resource.effects.empty());
    for (const auto& s : pool.prompts_benign) CHECK(s.prompt.effects.empty());
  }

  SUBCASE("seed round-trips through JSON") {
    for (const auto& s : pool.tools_malicious) {
      std::string error;
      auto back = attack::ToolSeed::from_json(s.to_json(), &error);
      REQUIRE(back.has_value());
      CHECK(back->to_json() == s.to_json());
    }
    for (const auto& s : pool.metadata_seeds) {
      auto back = attack::MetadataSeed::from_json(s.to_json(), nullptr);
      REQUIRE(back.has_value());
      CHECK(back->to_json() == s.to_json());
    }
    for (const auto& s : pool.launch_seeds) {
      auto back = attack::LaunchSeed::from_json(s.to_json(), nullptr);
      REQUIRE(back.has_value());
      CHECK(back->to_json() == s.to_json());
    }
  }
}

TEST_CASE("seed pool validation rejects malformed pools") {
  const auto& shipped = shipped_pool();

  SUBCASE("benign seed with effects") {
    attack::SeedPool pool;
    attack::ToolSeed seed = shipped.tools_malicious[3];  // has effects
    seed.labels.clear();
    pool.tools_benign.push_back(seed);
    const auto violations = pool.validate();
    REQUIRE_FALSE(violations.empty());
    CHECK(violations.front().find("benign seed carries effects") !=
          std::string::npos);
  }

  SUBCASE("labels spanning categories") {
    attack::SeedPool pool;
    attack::ToolSeed seed = shipped.tools_malicious[0];  // A4
    seed.labels.push_back(shipped.tools_malicious[3].labels.front());  // A5
    pool.tools_malicious.push_back(seed);
    bool found = false;
    for (const auto& v : pool.validate())
      found = found || v.find("span multiple categories") != std::string::npos;
    CHECK(found);
  }

  SUBCASE("seed family and category must agree") {
    attack::SeedPool pool;
    attack::ToolSeed seed = shipped.tools_malicious[0];
    seed.labels.front().category = attack::Category::kResourceMetadata;
    seed.labels.front().variant = "type-confusion";
    pool.tools_malicious.push_back(seed);
    bool found = false;
    for (const auto& v : pool.validate())
      found = found ||
              v.find("does not belong to this seed family") != std::string::npos;
    CHECK(found);
  }

  SUBCASE("duplicate ids") {
    attack::SeedPool pool;
    pool.tools_benign.push_back(shipped.tools_benign[0]);
    pool.tools_benign.push_back(shipped.tools_benign[0]);
    bool found = false;
    for (const auto& v : pool.validate())
      found = found || v.find("duplicate seed id") != std::string::npos;
    CHECK(found);
  }

  SUBCASE("malicious seed without labels") {
    attack::SeedPool pool;
    attack::ToolSeed seed = shipped.tools_benign[0];
    pool.tools_malicious.push_back(seed);
    bool found = false;
    for (const auto& v : pool.validate())
      found = found || v.find("carries no labels") != std::string::npos;
    CHECK(found);
  }
}

TEST_CASE("enumerate_count: closed form, oracle, and overflow") {
  using gen::CountConvention;
  using gen::PoolShape;

  SUBCASE("paper pin: 10 x 10 -> 1,046,529") {
    CHECK(gen::enumerate_count(10, 10) == 1046529u);
    CHECK(gen::enumerate_count(gen::PoolShape::of(shipped_pool()),
                               CountConvention::kToolResourcePairs) ==
          1046529u);
  }

  SUBCASE("small-pool brute force agrees") {
    // Count non-empty (tool subset, resource subset) pairs directly.
    const int T = 3, R = 2;
    std::uint64_t brute = 0;
    for (int t = 1; t < (1 << T); ++t)
      for (int r = 1; r < (1 << R); ++r) ++brute;
    CHECK(brute == 21u);
    CHECK(gen::enumerate_count(T, R) == brute);
  }

  SUBCASE("full product on a tiny shape") {
    PoolShape shape;
    shape.metadata = 1;
    shape.launch = 2;
    shape.init = 2;
    shape.tools = 2;
    shape.resources = 1;
    shape.prompts = 1;
    // (1+1) * (2+1) * 2^2 * (2^2-1) * 2^1 * 2^1 = 2*3*4*3*2*2
    CHECK(gen::enumerate_count(shape, CountConvention::kFullProduct) == 288u);
  }

  SUBCASE("full product of the shipped pool") {
    // 4 * 6 * 2^7 * 1023 * 2^10 * 2^5 = 102,978,551,808
    CHECK(gen::enumerate_count(gen::PoolShape::of(shipped_pool()),
                               CountConvention::kFullProduct) ==
          102978551808u);
  }

  SUBCASE("overflow throws instead of wrapping") {
    PoolShape shape;
    shape.tools = 64;
    shape.resources = 64;
    CHECK_THROWS_AS(
        gen::enumerate_count(shape, CountConvention::kToolResourcePairs),
        std::overflow_error);
    shape.tools = 2;
    shape.resources = 65;
    CHECK_THROWS_AS(
        gen::enumerate_count(shape, CountConvention::kFullProduct),
        std::overflow_error);
  }
}

TEST_CASE("compose: selections become valid labeled manifests") {
  const auto& pool = shipped_pool();

  SUBCASE("impersonation metadata seed overrides the name") {
    gen::CompositionSelection sel;
    sel.metadata_index = 1;  // deceptive twin
    sel.tool_indices = {10, 11};  // benign fill
    sel.target_category = attack::Category::kServerMetadata;
    sel.corpus_id = "A1-test";
    auto result = gen::compose(pool, sel);
    REQUIRE(result.ok());
    const auto& m = *result.manifest;
    CHECK(m.metadata.name == "official-paypal-server");
    CHECK(m.metadata.vendor == "paypal");
    REQUIRE(m.labels.size() == 1);
    CHECK(m.labels.front().qualified() == "A1:deceptive-metadata");
    // Metadata companions lead the tool listing.
    REQUIRE_FALSE(m.tools.empty());
    CHECK(m.tools.front().name == "send_payment");
    CHECK(m.validate().empty());
  }

  SUBCASE("companion resources and completions ride along") {
    gen::CompositionSelection sel;
    sel.tool_indices = {6, 12};  // report_builder + one benign
    sel.target_category = attack::Category::kToolInvocation;
    auto result = gen::compose(pool, sel);
    REQUIRE(result.ok());
    CHECK(result.manifest->find_resource("stage://second/payload") != nullptr);

    gen::CompositionSelection psel;
    psel.tool_indices = {15};
    psel.prompt_indices = {3};  // book-summary with completion rule
    psel.target_category = attack::Category::kPromptInvocation;
    auto presult = gen::compose(pool, psel);
    REQUIRE(presult.ok());
    REQUIRE(presult.manifest->completions.size() == 1);
    CHECK(presult.manifest->completions.front().ref_name == "book-summary");

    gen::CompositionSelection rsel;
    rsel.tool_indices = {20};
    rsel.resource_indices = {8};  // deploy-notes with cache_cleaner companion
    rsel.target_category = attack::Category::kResourceOutput;
    auto rresult = gen::compose(pool, rsel);
    REQUIRE(rresult.ok());
    CHECK(rresult.manifest->find_tool("cache_cleaner") != nullptr);
  }

  SUBCASE("labels accumulate across malicious seeds of one category") {
    gen::CompositionSelection sel;
    sel.tool_indices = {7, 9, 25};  // flight_search + account_alerts + benign
    sel.target_category = attack::Category::kToolOutput;
    auto result = gen::compose(pool, sel);
    REQUIRE(result.ok());
    std::set<std::string> qualified;
    for (const auto& l : result.manifest->labels)
      qualified.insert(l.qualified());
    CHECK(qualified ==
          std::set<std::string>{"A6:control-flow-hijack", "A6:disinformation",
                                "A6:phishing"});
  }

  SUBCASE("category purity is enforced") {
    gen::CompositionSelection sel;
    sel.tool_indices = {0, 3};  // A4 + A5 seeds
    sel.target_category = attack::Category::kToolMetadata;
    auto result = gen::compose(pool, sel);
    CHECK_FALSE(result.ok());
    bool mentioned = false;
    for (const auto& e : result.errors)
      mentioned = mentioned || e.find("mixes category") != std::string::npos;
    CHECK(mentioned);
  }

  SUBCASE("malicious seeds need a target category") {
    gen::CompositionSelection sel;
    sel.tool_indices = {0, 10};
    auto result = gen::compose(pool, sel);
    CHECK_FALSE(result.ok());
  }

  SUBCASE("a target category needs a malicious seed") {
    gen::CompositionSelection sel;
    sel.tool_indices = {10, 11};
    sel.target_category = attack::Category::kToolMetadata;
    auto result = gen::compose(pool, sel);
    CHECK_FALSE(result.ok());
  }

  SUBCASE("tool selection must be non-empty") {
    gen::CompositionSelection sel;
    sel.resource_indices = {15};
    auto result = gen::compose(pool, sel);
    CHECK_FALSE(result.ok());
  }

  SUBCASE("out-of-range indices are reported") {
    gen::CompositionSelection sel;
    sel.tool_indices = {999};
    auto result = gen::compose(pool, sel);
    CHECK_FALSE(result.ok());
  }

  SUBCASE("identical selections compose byte-identical manifests") {
    gen::CompositionSelection sel;
    sel.tool_indices = {4, 13, 27};
    sel.resource_indices = {12};
    sel.target_category = attack::Category::kToolInvocation;
    sel.rng_seed = 42;
    sel.corpus_id = "A5-test";
    auto a = gen::compose(pool, sel);
    auto b = gen::compose(pool, sel);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.manifest->to_json().dump() == b.manifest->to_json().dump());
  }

  SUBCASE("rng seed changes only the cosmetic name") {
    gen::CompositionSelection sel;
    sel.tool_indices = {4, 13};
    sel.target_category = attack::Category::kToolInvocation;
    sel.rng_seed = 1;
    auto a = gen::compose(pool, sel);
    sel.rng_seed = 2;
    auto b = gen::compose(pool, sel);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.manifest->metadata.name != b.manifest->metadata.name);
    CHECK(gen::CompositionSelection{sel}.canonical_key() ==
          sel.canonical_key());
    auto labels_of = [](const server::ServerManifest& m) {
      std::vector<std::string> out;
      for (const auto& l : m.labels) out.push_back(l.qualified());
      return out;
    };
    CHECK(labels_of(*a.manifest) == labels_of(*b.manifest));
  }
}

TEST_CASE("composition selection round-trips and fingerprints") {
  gen::CompositionSelection sel;
  sel.metadata_index = 2;
  sel.init_indices = {3, 1, 3};
  sel.tool_indices = {12, 0};
  sel.rng_seed = 77;
  sel.target_category = attack::Category::kToolMetadata;
  sel.corpus_id = "A4-007";

  CHECK(sel.canonical_key() == "m:2|l:-|i:1,3|t:0,12|r:-|p:-");

  auto back = gen::CompositionSelection::from_json(sel.to_json());
  REQUIRE(back.has_value());
  CHECK(back->canonical_key() == sel.canonical_key());
  CHECK(back->rng_seed == 77);
  CHECK(back->corpus_id == "A4-007");
  REQUIRE(back->target_category.has_value());
  CHECK(*back->target_category == attack::Category::kToolMetadata);
}

TEST_CASE("generate_corpus: labeled corpus shape and determinism") {
  const auto& pool = shipped_pool();
  const auto dir = util::make_temp_dir("mcpforge-corpus-");

  gen::CorpusOptions options;
  options.per_category = 10;
  options.rng_seed = 1;
  const auto outcome = gen::generate_corpus(pool, options, dir);
  for (const auto& e : outcome.errors) MESSAGE(e);
  REQUIRE(outcome.ok);
  REQUIRE(outcome.entries.size() == 120);

  SUBCASE("per-category counts, ids, and on-disk manifests") {
    std::map<std::string, int> per_category;
    std::set<std::string> keys;
    for (const auto& entry : outcome.entries) {
      per_category[entry.category]++;
      CHECK(keys.insert(entry.selection.canonical_key()).second);
      CHECK(entry.corpus_id.rfind(entry.category + "-", 0) == 0);

      std::vector<std::string> errors;
      auto m = server::ServerManifest::load(dir / entry.file, &errors);
      REQUIRE(m.has_value());
      CHECK(m->validate().empty());
      CHECK(m->corpus_id == entry.corpus_id);
      CHECK(m->metadata.name == entry.server_name);
      REQUIRE_FALSE(m->labels.empty());
      for (const auto& label : m->labels)
        CHECK(attack::category_id(label.category) == entry.category);
      std::vector<std::string> qualified;
      for (const auto& label : m->labels) qualified.push_back(label.qualified());
      CHECK(qualified == entry.variants);
    }
    CHECK(per_category.size() == 12);
    for (const auto& [category, n] : per_category) {
      CAPTURE(category);
      CHECK(n == 10);
    }
  }

  SUBCASE("every seed of every category appears") {
    std::map<std::string, std::set<std::size_t>> used;
    for (const auto& entry : outcome.entries) {
      const auto& sel = entry.selection;
      if (sel.metadata_index) used[entry.category].insert(*sel.metadata_index);
      if (sel.launch_index) used[entry.category].insert(*sel.launch_index);
      for (auto i : sel.init_indices) used[entry.category].insert(i);
      for (auto i : sel.tool_indices)
        if (i < pool.tools_malicious.size()) used[entry.category].insert(i);
      for (auto i : sel.resource_indices)
        if (i < pool.resources_malicious.size()) used[entry.category].insert(i);
      for (auto i : sel.prompt_indices)
        if (i < pool.prompts_malicious.size()) used[entry.category].insert(i);
    }
    for (const auto& info : attack::all_categories()) {
      const auto expected = pool.seeds_of(info.category);
      CAPTURE(info.id);
      CHECK(used[info.id] ==
            std::set<std::size_t>(expected.begin(), expected.end()));
    }
  }

  SUBCASE("labels.json indexes the corpus") {
    const auto index =
        nlohmann::json::parse(slurp(dir / "labels.json"), nullptr, false);
    REQUIRE_FALSE(index.is_discarded());
    CHECK(index["kind"] == "mcpforge-corpus-index");
    CHECK(index["benign"] == false);
    REQUIRE(index["entries"].is_array());
    REQUIRE(index["entries"].size() == 120);
    for (const auto& row : index["entries"]) {
      CHECK(fs::exists(dir / row["file"].get<std::string>()));
      for (const auto& v : row["variants"]) {
        auto parsed =
            attack::parse_qualified_label(v.get<std::string>());
        CHECK(parsed.has_value());
      }
    }
  }

  SUBCASE("rerun with the same seed is byte-identical") {
    const auto dir2 = util::make_temp_dir("mcpforge-corpus-rerun-");
    const auto outcome2 = gen::generate_corpus(pool, options, dir2);
    REQUIRE(outcome2.ok);
    REQUIRE(outcome2.entries.size() == outcome.entries.size());
    for (const auto& entry : outcome.entries)
      CHECK(slurp(dir / entry.file) == slurp(dir2 / entry.file));
    CHECK(slurp(dir / "labels.json") == slurp(dir2 / "labels.json"));
    fs::remove_all(dir2);
  }

  SUBCASE("a different seed changes the draw") {
    const auto dir3 = util::make_temp_dir("mcpforge-corpus-seed2-");
    gen::CorpusOptions alt = options;
    alt.rng_seed = 2;
    const auto outcome3 = gen::generate_corpus(pool, alt, dir3);
    REQUIRE(outcome3.ok);
    CHECK(slurp(dir / "labels.json") != slurp(dir3 / "labels.json"));
    fs::remove_all(dir3);
  }

  fs::remove_all(dir);
}

TEST_CASE("generate_corpus: benign corpus is label-free and effect-free") {
  const auto& pool = shipped_pool();
  const auto dir = util::make_temp_dir("mcpforge-benign-");

  gen::CorpusOptions options;
  options.benign = true;
  options.benign_count = 15;
  options.rng_seed = 9;
  const auto outcome = gen::generate_corpus(pool, options, dir);
  for (const auto& e : outcome.errors) MESSAGE(e);
  REQUIRE(outcome.ok);
  REQUIRE(outcome.entries.size() == 15);

  for (const auto& entry : outcome.entries) {
    CHECK(entry.category == "benign");
    CHECK(entry.variants.empty());
    CHECK(entry.corpus_id.rfind("benign-", 0) == 0);
    std::vector<std::string> errors;
    auto m = server::ServerManifest::load(dir / entry.file, &errors);
    REQUIRE(m.has_value());
    CHECK(m->benign());
    CHECK(m->validate().empty());
    CHECK(total_effects(*m) == 0);
    CHECK_FALSE(m->rug_pull.enabled);
  }

  const auto index =
      nlohmann::json::parse(slurp(dir / "labels.json"), nullptr, false);
  REQUIRE_FALSE(index.is_discarded());
  CHECK(index["benign"] == true);

  fs::remove_all(dir);
}
