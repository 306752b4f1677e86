#pragma once

#include <cstdint>

namespace hsan {

// Independent component streams derived from one root seed.
enum class SeedStream : std::uint64_t {
  kParamInit = 1,
  kKMeansEpoch = 2,
  kKMeansFinal = 3,
  kSynthetic = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based split: same (root, stream, counter) always gives the same seed,
// and distinct triples give statistically independent seeds.
std::uint64_t derive_seed(std::uint64_t root, SeedStream stream, std::uint64_t counter = 0);

}  // namespace hsan
