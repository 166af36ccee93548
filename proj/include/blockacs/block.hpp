#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace blockacs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kSupportTolerance = 1e-9;
inline constexpr double kRankTolerance = 1e-8;
inline constexpr double kCertificateTolerance = 1e-6;
inline constexpr double kCodingTolerance = 1e-10;
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

// Shape of the block-sparse model: K blocks of height alpha, codes of width
// beta, at most s active blocks.
struct BlockStructure {
  int K = 1;
  int alpha = 1;
  int beta = 1;
  int s = 1;

  // Throws ArgumentError unless 1 <= s <= K, alpha >= 1, beta >= 1.
  void validate() const;

  Index dim() const { return static_cast<Index>(K) * alpha; }
  Index offset(int block) const { return static_cast<Index>(block) * alpha; }
  BlockStructure with_sparsity(int level) const;

  friend bool operator==(const BlockStructure&, const BlockStructure&) = default;
};

// Sorted set of distinct block indices. Internally 0-based; every serialized
// form (JSON, CLI) is 1-based.
class SupportSet {
 public:
  SupportSet() = default;
  // Sorts the indices; throws RangeError on duplicates or indices outside [0, K).
  SupportSet(std::vector<int> indices, int K);

  static SupportSet from_one_based(const std::vector<int>& indices, int K);
  static SupportSet range(int first, int count);

  std::span<const int> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(int block) const;
  int operator[](std::size_t k) const { return indices_[k]; }

  std::vector<int> one_based() const;
  SupportSet intersect(const SupportSet& other) const;

  friend auto operator<=>(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<int> indices_;
};

// P x K*alpha dictionary viewed as K column blocks of width alpha.
class BlockDict {
 public:
  // Throws ShapeError if data.cols() != K*alpha or data has no rows, and
  // ArgumentError if any entry is not finite.
  BlockDict(BlockStructure structure, Matrix data);

  // Infers K = data.cols() / alpha.
  static BlockDict from_matrix(Matrix data, int alpha, int s = 1);

  const BlockStructure& structure() const { return structure_; }
  const Matrix& matrix() const { return data_; }
  Index ambient_dim() const { return data_.rows(); }
  int num_blocks() const { return structure_.K; }

  auto block(int i) const { return data_.middleCols(structure_.offset(i), structure_.alpha); }

  // Columns of the blocks in T, in increasing block order (P x |T|*alpha).
  Matrix restrict(const SupportSet& T) const;

 private:
  BlockStructure structure_;
  Matrix data_;
};

// K*alpha vector with at most s nonzero blocks.
struct BlockSparseVec {
  BlockStructure structure;
  Vector values;
  SupportSet support;

  // Blocks whose max magnitude is <= tol are zeroed and dropped from the
  // support. Throws ArgumentError if more than structure.s blocks stay active.
  static BlockSparseVec from_values(Vector values, const BlockStructure& structure,
                                    double tol = 0.0);
};

// e^K_i (x) e^alpha_j with 0-based (i, j).
BlockSparseVec make_indicator(const BlockStructure& structure, int i, int j);

// Blocks of v whose max-magnitude entry exceeds tol.
SupportSet block_support(const Vector& v, const BlockStructure& structure,
                         double tol = kSupportTolerance);

// Splits a K*alpha x beta code matrix into its beta columns.
std::vector<Vector> split_columns(const Matrix& code, const BlockStructure& structure);

// Rows of the blocks in T, gathered from a K*alpha vector.
Vector gather_blocks(const Vector& v, const BlockStructure& structure, const SupportSet& T);
// Inverse of gather_blocks: scatter into a zero K*alpha vector.
Vector scatter_blocks(const Vector& packed, const BlockStructure& structure, const SupportSet& T);

}  // namespace blockacs
