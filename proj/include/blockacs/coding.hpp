#pragma once

#include "blockacs/block.hpp"

#include <cstdint>
#include <string_view>

namespace blockacs {

enum class CodingMethod { block_omp, exhaustive_oracle };

std::string_view to_string(CodingMethod method);

struct CodingResult {
  BlockSparseVec code;
  // Blocks the solver fitted on. May be larger than code.support when some
  // fitted blocks came out exactly zero.
  SupportSet selected;
  // |y - A code| / |y|, or the absolute norm when y = 0.
  double residual_norm = 0.0;
  CodingMethod method = CodingMethod::block_omp;
};

// Relative residual convention shared by all coders.
double relative_residual(const Vector& y, const Vector& fit);

// Least squares of y on the columns of A_T. Throws RankError when A_T is
// rank deficient and require_full_rank is set; otherwise returns the
// minimum-norm solution.
Vector solve_on_support(const BlockDict& A, const SupportSet& T, const Vector& y,
                        bool require_full_rank);

// Block orthogonal matching pursuit: pick the unselected block maximizing
// |A_i^T r|, refit on all selected blocks, stop at s blocks or when the
// relative residual drops to tol.
CodingResult block_omp(const BlockDict& A, const Vector& y, int s, double tol = kCodingTolerance);

// Least squares on every size-s support; best residual wins. Supports whose
// residual is within tol of the best count as tied, and the lexicographically
// smallest tied support is returned. Supports are evaluated in parallel.
CodingResult exhaustive_code(const BlockDict& A, const Vector& y, int s,
                             double tol = kCodingTolerance, std::uint64_t cap = kEnumerationCap);

namespace reference {
CodingResult exhaustive_code_serial(const BlockDict& A, const Vector& y, int s,
                                    double tol = kCodingTolerance,
                                    std::uint64_t cap = kEnumerationCap);
}  // namespace reference

}  // namespace blockacs
