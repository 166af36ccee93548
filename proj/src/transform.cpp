#include "blockacs/transform.hpp"

#include "blockacs/errors.hpp"

#include <string>

namespace blockacs {

BlockPermutation BlockPermutation::identity(int K) {
  BlockPermutation p{K, std::vector<int>(static_cast<std::size_t>(K))};
  for (int i = 0; i < K; ++i) p.pi[static_cast<std::size_t>(i)] = i;
  return p;
}

BlockPermutation BlockPermutation::make(std::vector<int> pi) {
  BlockPermutation p{static_cast<int>(pi.size()), std::move(pi)};
  if (!p.is_bijection()) throw ArgumentError("block permutation is not a bijection");
  return p;
}

bool BlockPermutation::is_bijection() const {
  if (static_cast<int>(pi.size()) != K) return false;
  std::vector<bool> hit(static_cast<std::size_t>(K), false);
  for (int j : pi) {
    if (j < 0 || j >= K || hit[static_cast<std::size_t>(j)]) return false;
    hit[static_cast<std::size_t>(j)] = true;
  }
  return true;
}

BlockPermutation BlockPermutation::inverse() const {
  if (!is_bijection()) throw ArgumentError("cannot invert a non-bijective permutation");
  BlockPermutation out{K, std::vector<int>(static_cast<std::size_t>(K))};
  for (int i = 0; i < K; ++i) out.pi[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)])] = i;
  return out;
}

BlockPermutation BlockPermutation::compose(const BlockPermutation& after) const {
  if (after.K != K) throw ShapeError("composing permutations of different sizes");
  BlockPermutation out{K, std::vector<int>(static_cast<std::size_t>(K))};
  for (int i = 0; i < K; ++i) {
    out.pi[static_cast<std::size_t>(i)] = pi[static_cast<std::size_t>(after.pi[static_cast<std::size_t>(i)])];
  }
  return out;
}

BlockDiagonal BlockDiagonal::identity(const BlockStructure& structure) {
  return BlockDiagonal{structure, std::vector<Matrix>(static_cast<std::size_t>(structure.K),
                                                      Matrix::Identity(structure.alpha, structure.alpha))};
}

BlockDiagonal BlockDiagonal::make(const BlockStructure& structure, std::vector<Matrix> blocks) {
  if (static_cast<int>(blocks.size()) != structure.K) {
    throw ShapeError("block diagonal needs " + std::to_string(structure.K) + " blocks, got " +
                     std::to_string(blocks.size()));
  }
  for (const auto& b : blocks) {
    if (b.rows() != structure.alpha || b.cols() != structure.alpha) {
      throw ShapeError("block diagonal entry is not alpha x alpha");
    }
  }
  return BlockDiagonal{structure, std::move(blocks)};
}

bool BlockDiagonal::all_invertible(double tol) const {
  for (const auto& b : blocks) {
    Eigen::JacobiSVD<Matrix> svd(b);
    const Vector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0 || sv(sv.size() - 1) <= tol * sv(0)) return false;
  }
  return true;
}

Matrix BlockDiagonal::dense() const {
  const int a = structure.alpha;
  Matrix out = Matrix::Zero(structure.dim(), structure.dim());
  for (int i = 0; i < structure.K; ++i) {
    out.block(structure.offset(i), structure.offset(i), a, a) = blocks[static_cast<std::size_t>(i)];
  }
  return out;
}

namespace {

void check_shapes(const BlockDict& B, const BlockPermutation& perm, const BlockDiagonal& D) {
  const auto& st = B.structure();
  if (perm.K != st.K || static_cast<int>(perm.pi.size()) != st.K) {
    throw ShapeError("permutation size does not match dictionary");
  }
  if (D.structure.K != st.K || D.structure.alpha != st.alpha ||
      static_cast<int>(D.blocks.size()) != st.K) {
    throw ShapeError("block diagonal shape does not match dictionary");
  }
  for (const auto& b : D.blocks) {
    if (b.rows() != st.alpha || b.cols() != st.alpha) throw ShapeError("block diagonal entry is not alpha x alpha");
  }
  for (int j : perm.pi) {
    if (j < 0 || j >= st.K) throw ShapeError("permutation entry outside 1..K");
  }
}

}  // namespace

BlockDict apply_transform(const BlockDict& B, const BlockPermutation& perm, const BlockDiagonal& D) {
  check_shapes(B, perm, D);
  const auto& st = B.structure();
  Matrix out(B.ambient_dim(), st.dim());
  for (int i = 0; i < st.K; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out.middleCols(st.offset(i), st.alpha) = B.block(perm.pi[u]) * D.blocks[u];
  }
  return BlockDict(st, std::move(out));
}

BlockDict inverse_transform(const BlockDict& A, const BlockPermutation& perm, const BlockDiagonal& D) {
  check_shapes(A, perm, D);
  if (!perm.is_bijection()) throw ArgumentError("inverse transform needs a bijective permutation");
  if (!D.all_invertible()) throw RankError("inverse transform needs invertible diagonal blocks");
  const auto& st = A.structure();
  Matrix out(A.ambient_dim(), st.dim());
  for (int i = 0; i < st.K; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out.middleCols(st.offset(perm.pi[u]), st.alpha) = A.block(i) * D.blocks[u].inverse();
  }
  return BlockDict(st, std::move(out));
}

BlockTransform compose_transforms(const BlockTransform& first, const BlockTransform& second) {
  const int K = first.perm.K;
  if (second.perm.K != K || first.diagonal.blocks.size() != second.diagonal.blocks.size()) {
    throw ShapeError("composing transforms of different shapes");
  }
  BlockTransform out{first.perm.compose(second.perm), first.diagonal};
  for (int i = 0; i < K; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const auto via = static_cast<std::size_t>(second.perm.pi[u]);
    out.diagonal.blocks[u] = first.diagonal.blocks[via] * second.diagonal.blocks[u];
  }
  return out;
}

}  // namespace blockacs
