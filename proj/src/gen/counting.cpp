#include "mcpforge/gen/counting.hpp"

#include <limits>
#include <stdexcept>

namespace mcpforge::gen {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw std::overflow_error("composition count exceeds 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a)
    throw std::overflow_error("composition count exceeds 64 bits");
  return a + b;
}

// 2^n, throwing once it no longer fits.
std::uint64_t pow2(std::uint64_t n) {
  if (n >= 64) throw std::overflow_error("composition count exceeds 64 bits");
  return std::uint64_t{1} << n;
}

// 2^n - 1 (fits for n == 64 as well).
std::uint64_t pow2_minus_1(std::uint64_t n) {
  if (n > 64) throw std::overflow_error("composition count exceeds 64 bits");
  if (n == 64) return std::numeric_limits<std::uint64_t>::max();
  return (std::uint64_t{1} << n) - 1;
}

}  // namespace

PoolShape PoolShape::of(const attack::SeedPool& pool) {
  PoolShape s;
  s.metadata = pool.metadata_seeds.size();
  s.launch = pool.launch_seeds.size();
  s.init = pool.init_seeds.size();
  s.tools = pool.tools_malicious.size();
  s.resources = pool.resources_malicious.size();
  s.prompts = pool.prompts_malicious.size();
  return s;
}

std::uint64_t enumerate_count(const PoolShape& shape, CountConvention c) {
  const std::uint64_t tool_subsets = pow2_minus_1(shape.tools);
  if (c == CountConvention::kToolResourcePairs)
    return checked_mul(tool_subsets, pow2_minus_1(shape.resources));

  std::uint64_t total = checked_add(shape.metadata, 1);
  total = checked_mul(total, checked_add(shape.launch, 1));
  total = checked_mul(total, pow2(shape.init));
  total = checked_mul(total, tool_subsets);
  total = checked_mul(total, pow2(shape.resources));
  return checked_mul(total, pow2(shape.prompts));
}

std::uint64_t enumerate_count(std::uint64_t tool_seeds,
                              std::uint64_t resource_seeds) {
  PoolShape shape;
  shape.tools = tool_seeds;
  shape.resources = resource_seeds;
  return enumerate_count(shape, CountConvention::kToolResourcePairs);
}

}  // namespace mcpforge::gen
