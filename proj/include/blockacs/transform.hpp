#pragma once

#include "blockacs/block.hpp"

#include <vector>

namespace blockacs {

// pi maps block i of A to block pi[i] of B (0-based).
struct BlockPermutation {
  int K = 0;
  std::vector<int> pi;

  static BlockPermutation identity(int K);
  // Throws ArgumentError unless pi is a bijection on {0..K-1}.
  static BlockPermutation make(std::vector<int> pi);

  bool is_bijection() const;
  BlockPermutation inverse() const;
  // result.pi[i] = pi[after.pi[i]].
  BlockPermutation compose(const BlockPermutation& after) const;

  friend bool operator==(const BlockPermutation&, const BlockPermutation&) = default;
};

struct BlockDiagonal {
  BlockStructure structure;
  std::vector<Matrix> blocks;  // K matrices, each alpha x alpha

  static BlockDiagonal identity(const BlockStructure& structure);
  // Throws ShapeError on a block count or size mismatch.
  static BlockDiagonal make(const BlockStructure& structure, std::vector<Matrix> blocks);

  // sigma_min(D_i) > tol * sigma_max(D_i) for every block.
  bool all_invertible(double tol = kRankTolerance) const;
  // Dense K*alpha x K*alpha matrix.
  Matrix dense() const;
};

// Block i of the result is B_{pi(i)} D_i, i.e. B (P_pi (x) I_alpha) D.
BlockDict apply_transform(const BlockDict& B, const BlockPermutation& perm, const BlockDiagonal& D);

// The B with A = B (P_pi (x) I_alpha) D: B_{pi(i)} = A_i D_i^{-1}.
BlockDict inverse_transform(const BlockDict& A, const BlockPermutation& perm, const BlockDiagonal& D);

struct BlockTransform {
  BlockPermutation perm;
  BlockDiagonal diagonal;
};

// apply_transform(apply_transform(B, first), second) == apply_transform(B, compose(first, second)).
BlockTransform compose_transforms(const BlockTransform& first, const BlockTransform& second);

}  // namespace blockacs
