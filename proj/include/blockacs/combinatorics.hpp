#pragma once

#include "blockacs/block.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace blockacs {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// C(n, k), saturating at kSaturated on overflow.
std::uint64_t binomial(int n, int k);

// All size-t subsets of {0..K-1} in lexicographic order.
std::vector<SupportSet> enumerate_supports(int K, int t);

// Throws CapacityError naming `what` when count > cap.
void require_enumerable(std::uint64_t count, std::uint64_t cap, const char* what);

// splitmix64 step; derives independent stream seeds from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace blockacs
