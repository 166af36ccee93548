#include "blockacs/generate.hpp"

#include "blockacs/combinatorics.hpp"
#include "blockacs/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace blockacs {

std::string_view to_string(DictionaryMode mode) {
  return mode == DictionaryMode::gaussian ? "gaussian" : "per-block-orthonormal";
}

DictionaryMode parse_dictionary_mode(std::string_view text) {
  if (text == "gaussian") return DictionaryMode::gaussian;
  if (text == "per-block-orthonormal") return DictionaryMode::per_block_orthonormal;
  throw ArgumentError("unknown dictionary mode \"" + std::string(text) + "\"");
}

namespace {

Matrix gaussian_matrix(Index rows, Index cols, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  // Column-major fill keeps the draw order independent of Eigen storage tricks.
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
  }
  return m;
}

Matrix thin_q(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

}  // namespace

BlockDict gen_dictionary(Index P, const BlockStructure& structure, std::uint64_t seed,
                         DictionaryMode mode) {
  structure.validate();
  if (P < structure.alpha) {
    throw ArgumentError("ambient dimension P=" + std::to_string(P) + " < alpha=" +
                        std::to_string(structure.alpha));
  }
  Rng rng(seed);
  Matrix data = gaussian_matrix(P, structure.dim(), 1.0 / std::sqrt(static_cast<double>(P)), rng);
  if (mode == DictionaryMode::per_block_orthonormal) {
    for (int i = 0; i < structure.K; ++i) {
      auto blk = data.middleCols(structure.offset(i), structure.alpha);
      blk = thin_q(blk);
    }
  }
  return BlockDict(structure, std::move(data));
}

GeneratedDictionary gen_rip_dictionary(Index P, const BlockStructure& structure, std::uint64_t seed,
                                       DictionaryMode mode, const RipRequirement& requirement) {
  const int level = std::clamp(requirement.level, 1, structure.K);
  for (int attempt = 0; attempt <= requirement.max_retries; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    BlockDict dict = gen_dictionary(P, structure, s, mode);
    RipReport rip = requirement.exact
                        ? rip_constant_exact(dict, level)
                        : rip_lower_bound_sampled(dict, level, requirement.samples, derive_seed(s, 7));
    if (rip.delta < 1.0) return GeneratedDictionary{std::move(dict), s, attempt, std::move(rip)};
  }
  throw HypothesisViolation("no dictionary with block RIP constant < 1 at level " + std::to_string(level) +
                            " after " + std::to_string(requirement.max_retries) + " retries");
}

SupportSet draw_support(int K, int k, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(K));
  std::iota(pool.begin(), pool.end(), 0);
  // Partial Fisher-Yates.
  for (int m = 0; m < k; ++m) {
    std::uniform_int_distribution<int> pick(m, K - 1);
    std::swap(pool[static_cast<std::size_t>(m)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return SupportSet(std::move(pool), K);
}

Vector draw_code_on_support(const BlockStructure& structure, const SupportSet& T, Rng& rng,
                            double scale) {
  std::uniform_real_distribution<double> magnitude(0.1 * scale, scale);
  std::bernoulli_distribution sign(0.5);
  Vector v = Vector::Zero(structure.dim());
  for (int i : T.indices()) {
    for (int j = 0; j < structure.alpha; ++j) {
      const double m = magnitude(rng);
      v(structure.offset(i) + j) = sign(rng) ? m : -m;
    }
  }
  return v;
}

std::vector<BlockSparseVec> gen_codes(const BlockStructure& structure, int n_samples,
                                      std::uint64_t seed, double coefficient_scale) {
  structure.validate();
  if (n_samples < 1) throw ArgumentError("gen_codes needs at least one sample");
  Rng rng(seed);
  std::vector<BlockSparseVec> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int n = 0; n < n_samples; ++n) {
    const SupportSet T = draw_support(structure.K, structure.s, rng);
    out.push_back(BlockSparseVec{structure, draw_code_on_support(structure, T, rng, coefficient_scale), T});
  }
  return out;
}

Matrix stack_codes(const std::vector<BlockSparseVec>& codes) {
  if (codes.empty()) return Matrix(0, 0);
  Matrix out(codes.front().values.size(), static_cast<Index>(codes.size()));
  for (std::size_t n = 0; n < codes.size(); ++n) out.col(static_cast<Index>(n)) = codes[n].values;
  return out;
}

Matrix random_orthogonal(Index n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, n, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Sign fix against R's diagonal gives the Haar-distributed Q.
  const Matrix& r = qr.matrixQR();
  for (Index c = 0; c < n; ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  return q;
}

BlockTransform random_block_transform(const BlockStructure& structure, std::uint64_t seed,
                                      double max_condition) {
  structure.validate();
  if (max_condition < 1.0) throw ArgumentError("max_condition must be >= 1");
  Rng rng(seed);
  std::vector<int> pi(static_cast<std::size_t>(structure.K));
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng);

  std::uniform_real_distribution<double> sigma(1.0, max_condition);
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(structure.K));
  for (int i = 0; i < structure.K; ++i) {
    const Matrix U = random_orthogonal(structure.alpha, rng);
    const Matrix V = random_orthogonal(structure.alpha, rng);
    Vector sv(structure.alpha);
    for (Index k = 0; k < sv.size(); ++k) sv(k) = sigma(rng);
    blocks.push_back(U * sv.asDiagonal() * V.transpose());
  }
  return BlockTransform{BlockPermutation::make(std::move(pi)),
                        BlockDiagonal::make(structure, std::move(blocks))};
}

}  // namespace blockacs
