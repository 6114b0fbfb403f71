#include "mcpforge/gen/corpus.hpp"

#include <set>

#include "mcpforge/util/fs.hpp"
#include "mcpforge/util/rng.hpp"

namespace mcpforge::gen {

namespace {

using attack::Category;
using attack::SeedPool;

std::string zero3(std::size_t n) {
  std::string s = std::to_string(n);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}

// Picks `want` distinct values from [base, base + span) using `stream`.
std::vector<std::size_t> pick_distinct(util::SplitMix64& stream,
                                       std::size_t base, std::size_t span,
                                       std::size_t want) {
  std::vector<std::size_t> out;
  if (span == 0) return out;
  want = std::min(want, span);
  std::set<std::size_t> seen;
  while (seen.size() < want) {
    const std::size_t candidate = base + stream.below(span);
    if (seen.insert(candidate).second) out.push_back(candidate);
  }
  return out;
}

// One candidate selection for manifest `i` of `category`.
CompositionSelection draw_selection(const SeedPool& pool, Category category,
                                    const std::vector<std::size_t>& seeds,
                                    std::size_t i, util::SplitMix64& stream) {
  CompositionSelection sel;
  sel.target_category = category;
  const std::size_t pick = seeds[i % seeds.size()];

  switch (category) {
    case Category::kServerMetadata:
      sel.metadata_index = pick;
      break;
    case Category::kLaunchConfig:
      sel.launch_index = pick;
      break;
    case Category::kInitialization:
      sel.init_indices = {pick};
      break;
    case Category::kToolMetadata:
    case Category::kToolInvocation:
    case Category::kToolOutput:
      sel.tool_indices = {pick};
      break;
    case Category::kResourceMetadata:
    case Category::kResourceInvocation:
    case Category::kResourceOutput:
      sel.resource_indices = {pick};
      break;
    case Category::kPromptMetadata:
    case Category::kPromptInvocation:
    case Category::kPromptOutput:
      sel.prompt_indices = {pick};
      break;
  }

  const std::size_t benign_tool_base = pool.tools_malicious.size();
  const std::size_t benign_tools = pool.tools_benign.size();
  const std::size_t benign_resource_base = pool.resources_malicious.size();
  const std::size_t benign_resources = pool.resources_benign.size();
  const std::size_t benign_prompt_base = pool.prompts_malicious.size();
  const std::size_t benign_prompts = pool.prompts_benign.size();

  // Draw counts before sampling: nested stream calls in one expression
  // would leave the draw order unspecified.
  const std::size_t tool_fill = 1 + stream.below(3);
  for (auto idx : pick_distinct(stream, benign_tool_base, benign_tools,
                                tool_fill))
    sel.tool_indices.push_back(idx);
  const std::size_t resource_fill = stream.below(3);
  for (auto idx : pick_distinct(stream, benign_resource_base, benign_resources,
                                resource_fill))
    sel.resource_indices.push_back(idx);
  const std::size_t prompt_fill = stream.below(2);
  for (auto idx : pick_distinct(stream, benign_prompt_base, benign_prompts,
                                prompt_fill))
    sel.prompt_indices.push_back(idx);

  sel.rng_seed = stream.next();
  sel.normalize();
  return sel;
}

CompositionSelection draw_benign_selection(const SeedPool& pool,
                                           util::SplitMix64& stream) {
  CompositionSelection sel;
  const std::size_t benign_tool_base = pool.tools_malicious.size();
  const std::size_t tool_fill = 1 + stream.below(4);
  sel.tool_indices = pick_distinct(stream, benign_tool_base,
                                   pool.tools_benign.size(), tool_fill);
  const std::size_t resource_fill = stream.below(3);
  sel.resource_indices =
      pick_distinct(stream, pool.resources_malicious.size(),
                    pool.resources_benign.size(), resource_fill);
  const std::size_t prompt_fill = stream.below(2);
  sel.prompt_indices =
      pick_distinct(stream, pool.prompts_malicious.size(),
                    pool.prompts_benign.size(), prompt_fill);
  sel.rng_seed = stream.next();
  sel.normalize();
  return sel;
}

}  // namespace

nlohmann::json corpus_index_json(const CorpusOptions& options,
                                 const std::vector<CorpusEntry>& entries) {
  nlohmann::json index{{"schema_version", 1},
                       {"kind", "mcpforge-corpus-index"},
                       {"benign", options.benign},
                       {"rng_seed", options.rng_seed}};
  if (options.benign)
    index["benign_count"] = options.benign_count;
  else
    index["per_category"] = options.per_category;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json row{{"file", e.file},
                       {"corpus_id", e.corpus_id},
                       {"category", e.category},
                       {"server_name", e.server_name},
                       {"variants", e.variants},
                       {"selection", e.selection.to_json()}};
    list.push_back(std::move(row));
  }
  index["entries"] = std::move(list);
  return index;
}

CorpusOutcome generate_corpus(const attack::SeedPool& pool,
                              const CorpusOptions& options,
                              const std::filesystem::path& out_dir) {
  CorpusOutcome outcome;
  util::ensure_dir(out_dir);

  std::set<std::string> used_keys;

  auto emit = [&](CompositionSelection sel, const std::string& category_text,
                  const std::string& corpus_id) -> bool {
    sel.corpus_id = corpus_id;
    auto composed = compose(pool, sel);
    if (!composed.ok()) {
      for (auto& e : composed.errors)
        outcome.errors.push_back(corpus_id + ": " + e);
      return false;
    }
    const auto file = corpus_id + ".json";
    composed.manifest->save(out_dir / file);
    CorpusEntry entry;
    entry.file = file;
    entry.corpus_id = corpus_id;
    entry.category = category_text;
    entry.server_name = composed.manifest->metadata.name;
    for (const auto& label : composed.manifest->labels)
      entry.variants.push_back(label.qualified());
    entry.selection = std::move(sel);
    outcome.entries.push_back(std::move(entry));
    return true;
  };

  if (options.benign) {
    util::SplitMix64 stream(util::mix_seed(options.rng_seed, 0xBE));
    for (std::size_t i = 0; i < options.benign_count; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
        auto sel = draw_benign_selection(pool, stream);
        if (!used_keys.insert(sel.canonical_key()).second) continue;
        if (!emit(std::move(sel), "benign", "benign-" + zero3(i)))
          return outcome;
        placed = true;
      }
      if (!placed) {
        outcome.errors.push_back(
            "could not draw a distinct benign selection for index " +
            std::to_string(i));
        return outcome;
      }
    }
  } else {
    const auto& categories = attack::all_categories();
    for (std::size_t c = 0; c < categories.size(); ++c) {
      const Category category = categories[c].category;
      const auto seeds = pool.seeds_of(category);
      if (seeds.empty()) {
        outcome.errors.push_back("no seeds available for " +
                                 category_id(category));
        return outcome;
      }
      util::SplitMix64 stream(util::mix_seed(options.rng_seed, 101 + c));
      for (std::size_t i = 0; i < options.per_category; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
          auto sel = draw_selection(pool, category, seeds, i, stream);
          if (!used_keys.insert(sel.canonical_key()).second) continue;
          if (!emit(std::move(sel), category_id(category),
                    category_id(category) + "-" + zero3(i)))
            return outcome;
          placed = true;
        }
        if (!placed) {
          outcome.errors.push_back("could not draw a distinct selection for " +
                                   category_id(category) + " index " +
                                   std::to_string(i));
          return outcome;
        }
      }
    }
  }

  outcome.index_path = out_dir / "labels.json";
  util::write_file_atomic(outcome.index_path,
                          corpus_index_json(options, outcome.entries).dump(2) +
                              "\n");
  outcome.ok = true;
  return outcome;
}

}  // namespace mcpforge::gen
