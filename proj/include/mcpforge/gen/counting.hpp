// Closed-form size of the attack-composition space a seed pool spans.
// Counts range over the *malicious* seeds only — benign dilution never
// changes what a composition attacks, so it is not part of the space.
//
// Two conventions are exposed:
//   kToolResourcePairs — (2^T - 1) * (2^R - 1): every non-empty subset of
//       malicious tool seeds crossed with every non-empty subset of
//       malicious resource seeds.  This is the headline count (10 tool
//       seeds x 10 resource seeds -> 1,046,529 distinct servers).
//   kFullProduct — additionally ranges over the optional metadata seed,
//       the optional launch override, every init-effect subset, and every
//       malicious prompt subset:
//       (M + 1) * (L + 1) * 2^I * (2^T - 1) * 2^R * 2^P.
//
// All arithmetic is overflow-checked; counts that do not fit in 64 bits
// throw std::overflow_error rather than wrapping.
#pragma once

#include <cstdint>

#include "mcpforge/attack/seed_pool.hpp"

namespace mcpforge::gen {

enum class CountConvention { kToolResourcePairs, kFullProduct };

struct PoolShape {
  std::uint64_t metadata = 0;
  std::uint64_t launch = 0;
  std::uint64_t init = 0;
  std::uint64_t tools = 0;
  std::uint64_t resources = 0;
  std::uint64_t prompts = 0;

  static PoolShape of(const attack::SeedPool& pool);
};

std::uint64_t enumerate_count(const PoolShape& shape, CountConvention c);

// Headline convenience: (2^tool_seeds - 1) * (2^resource_seeds - 1).
std::uint64_t enumerate_count(std::uint64_t tool_seeds,
                              std::uint64_t resource_seeds);

}  // namespace mcpforge::gen
