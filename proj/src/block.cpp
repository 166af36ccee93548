#include "blockacs/block.hpp"

#include "blockacs/errors.hpp"

#include <algorithm>
#include <string>

namespace blockacs {

void BlockStructure::validate() const {
  if (K < 1) throw ArgumentError("K must be positive, got " + std::to_string(K));
  if (alpha < 1) throw ArgumentError("alpha must be positive, got " + std::to_string(alpha));
  if (beta < 1) throw ArgumentError("beta must be positive, got " + std::to_string(beta));
  if (s < 1 || s > K) {
    throw ArgumentError("s must lie in [1, K], got s=" + std::to_string(s) +
                        " K=" + std::to_string(K));
  }
}

BlockStructure BlockStructure::with_sparsity(int level) const {
  BlockStructure out = *this;
  out.s = level;
  out.validate();
  return out;
}

SupportSet::SupportSet(std::vector<int> indices, int K) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || indices_[k] >= K) {
      throw RangeError("block index " + std::to_string(indices_[k] + 1) + " outside 1.." +
                       std::to_string(K));
    }
    if (k > 0 && indices_[k] == indices_[k - 1]) {
      throw RangeError("duplicate block index " + std::to_string(indices_[k] + 1));
    }
  }
}

SupportSet SupportSet::from_one_based(const std::vector<int>& indices, int K) {
  std::vector<int> zero;
  zero.reserve(indices.size());
  for (int i : indices) zero.push_back(i - 1);
  return SupportSet(std::move(zero), K);
}

SupportSet SupportSet::range(int first, int count) {
  std::vector<int> idx(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) idx[static_cast<std::size_t>(k)] = first + k;
  return SupportSet(std::move(idx), first + count);
}

bool SupportSet::contains(int block) const {
  return std::binary_search(indices_.begin(), indices_.end(), block);
}

std::vector<int> SupportSet::one_based() const {
  std::vector<int> out(indices_);
  for (int& i : out) ++i;
  return out;
}

SupportSet SupportSet::intersect(const SupportSet& other) const {
  SupportSet out;
  std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(),
                        other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

BlockDict::BlockDict(BlockStructure structure, Matrix data)
    : structure_(structure), data_(std::move(data)) {
  structure_.validate();
  if (data_.rows() < 1) throw ShapeError("dictionary has no rows");
  if (data_.cols() != structure_.dim()) {
    throw ShapeError("dictionary has " + std::to_string(data_.cols()) + " columns, expected K*alpha=" +
                     std::to_string(structure_.dim()));
  }
  if (!data_.allFinite()) throw ArgumentError("dictionary contains non-finite entries");
}

BlockDict BlockDict::from_matrix(Matrix data, int alpha, int s) {
  if (alpha < 1) throw ArgumentError("alpha must be positive");
  if (data.cols() == 0 || data.cols() % alpha != 0) {
    throw ShapeError("column count " + std::to_string(data.cols()) + " is not a multiple of alpha=" +
                     std::to_string(alpha));
  }
  BlockStructure st{static_cast<int>(data.cols() / alpha), alpha, 1, s};
  return BlockDict(st, std::move(data));
}

Matrix BlockDict::restrict(const SupportSet& T) const {
  const int a = structure_.alpha;
  Matrix out(data_.rows(), static_cast<Index>(T.size()) * a);
  Index col = 0;
  for (int i : T.indices()) {
    if (i < 0 || i >= structure_.K) throw RangeError("support index outside dictionary");
    out.middleCols(col, a) = block(i);
    col += a;
  }
  return out;
}

BlockSparseVec BlockSparseVec::from_values(Vector values, const BlockStructure& structure,
                                           double tol) {
  structure.validate();
  if (values.size() != structure.dim()) {
    throw ShapeError("vector length " + std::to_string(values.size()) + " != K*alpha=" +
                     std::to_string(structure.dim()));
  }
  SupportSet support = block_support(values, structure, tol);
  for (int i = 0; i < structure.K; ++i) {
    if (!support.contains(i)) values.segment(structure.offset(i), structure.alpha).setZero();
  }
  if (static_cast<int>(support.size()) > structure.s) {
    throw ArgumentError("vector has " + std::to_string(support.size()) + " active blocks, s=" +
                        std::to_string(structure.s));
  }
  return BlockSparseVec{structure, std::move(values), std::move(support)};
}

BlockSparseVec make_indicator(const BlockStructure& structure, int i, int j) {
  structure.validate();
  if (i < 0 || i >= structure.K) {
    throw RangeError("block index " + std::to_string(i + 1) + " outside 1.." + std::to_string(structure.K));
  }
  if (j < 0 || j >= structure.alpha) {
    throw RangeError("within-block index " + std::to_string(j + 1) + " outside 1.." +
                     std::to_string(structure.alpha));
  }
  Vector v = Vector::Zero(structure.dim());
  v(structure.offset(i) + j) = 1.0;
  return BlockSparseVec{structure, std::move(v), SupportSet({i}, structure.K)};
}

SupportSet block_support(const Vector& v, const BlockStructure& structure, double tol) {
  if (v.size() != structure.dim()) {
    throw ShapeError("vector length " + std::to_string(v.size()) + " != K*alpha=" +
                     std::to_string(structure.dim()));
  }
  std::vector<int> active;
  for (int i = 0; i < structure.K; ++i) {
    if (v.segment(structure.offset(i), structure.alpha).cwiseAbs().maxCoeff() > tol) {
      active.push_back(i);
    }
  }
  return SupportSet(std::move(active), structure.K);
}

std::vector<Vector> split_columns(const Matrix& code, const BlockStructure& structure) {
  if (code.rows() != structure.dim() || code.cols() != structure.beta) {
    throw ShapeError("code is " + std::to_string(code.rows()) + "x" + std::to_string(code.cols()) +
                     ", expected " + std::to_string(structure.dim()) + "x" +
                     std::to_string(structure.beta));
  }
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(code.cols()));
  for (Index c = 0; c < code.cols(); ++c) out.emplace_back(code.col(c));
  return out;
}

Vector gather_blocks(const Vector& v, const BlockStructure& structure, const SupportSet& T) {
  const int a = structure.alpha;
  Vector out(static_cast<Index>(T.size()) * a);
  Index pos = 0;
  for (int i : T.indices()) {
    out.segment(pos, a) = v.segment(structure.offset(i), a);
    pos += a;
  }
  return out;
}

Vector scatter_blocks(const Vector& packed, const BlockStructure& structure, const SupportSet& T) {
  const int a = structure.alpha;
  if (packed.size() != static_cast<Index>(T.size()) * a) {
    throw ShapeError("packed coefficient length does not match support");
  }
  Vector out = Vector::Zero(structure.dim());
  Index pos = 0;
  for (int i : T.indices()) {
    out.segment(structure.offset(i), a) = packed.segment(pos, a);
    pos += a;
  }
  return out;
}

}  // namespace blockacs
