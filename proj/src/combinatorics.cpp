#include "blockacs/combinatorics.hpp"

#include "blockacs/errors.hpp"

#include <string>

namespace blockacs {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact at every step; guard the multiply.
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (r > kSaturated / num) return kSaturated;
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::vector<SupportSet> enumerate_supports(int K, int t) {
  std::vector<SupportSet> out;
  if (t < 0 || t > K) return out;
  std::vector<int> idx(static_cast<std::size_t>(t));
  for (int k = 0; k < t; ++k) idx[static_cast<std::size_t>(k)] = k;
  while (true) {
    out.emplace_back(idx, K);
    int k = t - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == K - t + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int m = k + 1; m < t; ++m) idx[static_cast<std::size_t>(m)] = idx[static_cast<std::size_t>(m - 1)] + 1;
  }
  return out;
}

void require_enumerable(std::uint64_t count, std::uint64_t cap, const char* what) {
  if (count > cap) {
    const std::string n = count == kSaturated ? std::string("> 2^64") : std::to_string(count);
    throw CapacityError(std::string(what) + " needs " + n + " evaluations, cap is " +
                        std::to_string(cap) + "; use the sampled variant");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace blockacs
