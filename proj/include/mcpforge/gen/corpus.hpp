// Corpus generation: a labeled set of manifests written to disk, plus a
// labels.json index.
//
// The malicious corpus holds per_category manifests for each of A1-A12.
// Within a category the generator cycles through that category's seeds
// (so every seed appears) and varies the benign dilution around them;
// distinctness is enforced on the structural selection tuple.  The benign
// corpus draws label-free selections only.  Both are pure functions of
// (pool, options): rerunning with the same inputs reproduces every output
// byte.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mcpforge/attack/seed_pool.hpp"
#include "mcpforge/gen/composer.hpp"

namespace mcpforge::gen {

struct CorpusOptions {
  std::size_t per_category = 10;
  std::uint64_t rng_seed = 1;
  bool benign = false;          // benign corpus instead of the labeled one
  std::size_t benign_count = 120;
};

struct CorpusEntry {
  std::string file;       // manifest file name within the corpus dir
  std::string corpus_id;  // e.g. "A5-003" or "benign-017"
  std::string category;   // "A5" or "benign"
  std::string server_name;
  std::vector<std::string> variants;  // qualified labels, e.g. "A5:code-execution"
  CompositionSelection selection;
};

struct CorpusOutcome {
  bool ok = false;
  std::vector<std::string> errors;
  std::vector<CorpusEntry> entries;
  std::filesystem::path index_path;
};

// Writes <corpus_id>.json manifests plus labels.json into out_dir
// (created if missing).
CorpusOutcome generate_corpus(const attack::SeedPool& pool,
                              const CorpusOptions& options,
                              const std::filesystem::path& out_dir);

// The index document generate_corpus writes as labels.json.
nlohmann::json corpus_index_json(const CorpusOptions& options,
                                 const std::vector<CorpusEntry>& entries);

}  // namespace mcpforge::gen
