#pragma once

#include "blockacs/block.hpp"

#include <cstdint>
#include <string_view>

namespace blockacs {

// Block RIP in the two-sided form
//   (1 - delta) |x|^2 <= |A x|^2 <= (1 + delta) |x|^2
// over every x supported on at most t blocks.

enum class RipMode { exact_enumeration, sampled_lower_bound };

std::string_view to_string(RipMode mode);

struct RipReport {
  int level = 0;
  double delta = 0.0;
  RipMode mode = RipMode::exact_enumeration;
  SupportSet worst_support;
  std::uint64_t supports_examined = 0;
};

// delta_T = max(lambda_max(G) - 1, 1 - lambda_min(G)), G the Gram matrix of A_T.
double rip_constant_for_support(const BlockDict& A, const SupportSet& T);

// Max of delta_T over all C(K, t) supports. Supports are evaluated in
// parallel; ties go to the lexicographically smallest support.
RipReport rip_constant_exact(const BlockDict& A, int t, std::uint64_t cap = kEnumerationCap);

// Max over n_samples uniformly drawn supports (duplicates examined once).
// When n_samples >= C(K, t) every support is examined, so the result equals
// the exact constant. Always a lower bound on the exact constant.
RipReport rip_lower_bound_sampled(const BlockDict& A, int t, std::uint64_t n_samples,
                                  std::uint64_t seed);

namespace reference {
// Single-threaded twin of rip_constant_exact, kept for tests and benchmarks.
RipReport rip_constant_exact_serial(const BlockDict& A, int t, std::uint64_t cap = kEnumerationCap);
}  // namespace reference

}  // namespace blockacs
