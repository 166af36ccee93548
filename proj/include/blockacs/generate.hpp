#pragma once

#include "blockacs/block.hpp"
#include "blockacs/rip.hpp"
#include "blockacs/transform.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace blockacs {

using Rng = std::mt19937_64;

enum class DictionaryMode { gaussian, per_block_orthonormal };

std::string_view to_string(DictionaryMode mode);
DictionaryMode parse_dictionary_mode(std::string_view text);

// Entries N(0, 1/P); per_block_orthonormal then replaces each block by the Q
// factor of its thin QR.
BlockDict gen_dictionary(Index P, const BlockStructure& structure, std::uint64_t seed,
                         DictionaryMode mode);

struct RipRequirement {
  int level = 2;  // clipped to K
  bool exact = true;
  std::uint64_t samples = 10'000;
  int max_retries = 1000;
};

struct GeneratedDictionary {
  BlockDict dict;
  std::uint64_t seed_used = 0;
  int retries = 0;
  RipReport rip;
};

// Draws with seed, seed+1, ... until the RIP constant at the requested level
// is below 1. Throws HypothesisViolation after max_retries failures.
GeneratedDictionary gen_rip_dictionary(Index P, const BlockStructure& structure,
                                       std::uint64_t seed, DictionaryMode mode,
                                       const RipRequirement& requirement);

// Uniform size-k subset of {0..K-1}.
SupportSet draw_support(int K, int k, Rng& rng);

// Coefficients on T with random sign and magnitude in [0.1*scale, scale].
Vector draw_code_on_support(const BlockStructure& structure, const SupportSet& T, Rng& rng,
                            double scale = 1.0);

// n_samples codes with uniformly drawn size-s supports.
std::vector<BlockSparseVec> gen_codes(const BlockStructure& structure, int n_samples,
                                      std::uint64_t seed, double coefficient_scale = 1.0);

// K*alpha x n matrix whose columns are the codes.
Matrix stack_codes(const std::vector<BlockSparseVec>& codes);

Matrix random_orthogonal(Index n, Rng& rng);

// Random permutation and D_i = U diag(sigma) V^T with sigma in [1, max_condition].
BlockTransform random_block_transform(const BlockStructure& structure, std::uint64_t seed,
                                      double max_condition = 10.0);

}  // namespace blockacs
