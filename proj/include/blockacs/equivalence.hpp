#pragma once

#include "blockacs/block.hpp"
#include "blockacs/rip.hpp"
#include "blockacs/transform.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace blockacs {

enum class EquivalenceStatus { equivalent, not_equivalent, ambiguous };

std::string_view to_string(EquivalenceStatus status);

struct BlockMatch {
  EquivalenceStatus status = EquivalenceStatus::equivalent;
  // pi[i] = matched block of B, or -1 when block i has zero or several matches.
  std::vector<int> pi;
  std::vector<int> unmatched;   // blocks of A with no matching span in B
  std::vector<int> ambiguous;   // blocks of A with more than one match
  std::vector<int> collisions;  // blocks of B claimed by more than one block of A
};

// pi(i) is the unique j with span(A_i) == span(B_j). Throws RankError when a
// block of B is rank deficient and ShapeError on mismatched dictionaries.
BlockMatch match_blocks(const BlockDict& A, const BlockDict& B, double tol = kCertificateTolerance);

struct BlockSolve {
  Matrix D;
  double residual = 0.0;  // |A_i - B_j D|_F / |A_i|_F (absolute if A_i = 0)
  bool invertible = false;
};

// Least-squares D minimizing |A_i - B_j D|_F. Throws RankError if B_j is
// rank deficient.
BlockSolve solve_block_transform(const Matrix& A_i, const Matrix& B_j,
                                 double rank_tol = kRankTolerance);

struct EquivalenceCertificate {
  EquivalenceStatus status = EquivalenceStatus::not_equivalent;
  BlockPermutation permutation;  // pi entries are -1 where no match exists
  BlockDiagonal diagonal;
  double residual = 0.0;
  std::vector<double> block_residuals;
  BlockMatch match;
};

// A == B (P_pi (x) I) D within tol? Failures come back as statuses.
EquivalenceCertificate recover_equivalence(const BlockDict& A, const BlockDict& B,
                                           double tol = kCertificateTolerance);

struct KappaResult {
  SupportSet source;
  SupportSet kappa;  // the support every probe agreed on, or the majority one
  bool consistent = false;
  std::vector<SupportSet> probe_supports;
  int agreeing_probes = 0;
  double max_residual = 0.0;
};

// Probes span(A_S) with n_probes seeded coefficient draws and codes each
// measurement in B at sparsity |S| with the exhaustive oracle. Throws
// HypothesisViolation if some probe has no |S|-block-sparse code in B within
// tol (relative residual).
KappaResult construct_kappa(const BlockDict& A, const BlockDict& B, const SupportSet& S,
                            int n_probes, std::uint64_t seed, double tol = kCertificateTolerance,
                            std::uint64_t cap = kEnumerationCap);

struct SupportCheck {
  SupportSet support;
  std::optional<SupportSet> kappa;
  bool consistent = false;
  bool violation = false;
  double max_residual = 0.0;
};

struct VerifyOptions {
  // Supports probed when C(K, s) exceeds this are a seeded sample.
  std::size_t max_supports = 256;
  std::uint64_t rip_cap = kEnumerationCap;
  std::uint64_t rip_samples = 10'000;
};

struct TheoremInstanceReport {
  int s = 1;
  RipReport rip;
  bool rip_hypothesis = false;  // rip.delta < 1

  std::vector<SupportCheck> supports;
  bool hypothesis_holds = false;

  EquivalenceCertificate certificate;

  std::vector<std::optional<int>> kappa_singletons;
  bool agreement = false;
};

TheoremInstanceReport verify_theorem_instance(const BlockDict& A, const BlockDict& B, int s,
                                              int n_probes, std::uint64_t seed,
                                              double tol = kCertificateTolerance,
                                              const VerifyOptions& options = {});

}  // namespace blockacs
