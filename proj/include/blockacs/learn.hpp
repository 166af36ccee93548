#pragma once

#include "blockacs/block.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blockacs {

enum class LearnerInit {
  // Consensus search for sample subspaces followed by pairwise intersection
  // down to alpha-dimensional block spans.
  span_intersection,
  // Each block spanned by randomly chosen samples.
  samples,
};

std::string_view to_string(LearnerInit init);
LearnerInit parse_learner_init(std::string_view text);

struct LearnerOptions {
  int iterations = 30;
  std::uint64_t seed = 0;
  LearnerInit init = LearnerInit::span_intersection;
  int init_trials = 100'000;
  // Samples whose relative distance to a candidate subspace is below this
  // count as inliers of that subspace.
  double init_inlier_tol = 1e-6;
  double coding_tol = kCodingTolerance;
  double rank_tol = kRankTolerance;
  // Fall back to exhaustive coding when greedy coding misses coding_tol and
  // C(K, s) is within this cap. Zero disables the fallback.
  std::uint64_t exhaustive_fallback_cap = 5000;
};

struct LearnerEvent {
  int iteration = 0;
  int block = 0;
  std::string kind;
  int sample = -1;
};

struct InitSummary {
  LearnerInit mode = LearnerInit::span_intersection;
  int trials_used = 0;
  int subspaces_found = 0;
  int block_spans_found = 0;
  int random_blocks = 0;
};

struct LearnResult {
  Matrix dictionary;
  std::vector<double> objective;  // sum of squared coding residuals, per iteration
  std::vector<LearnerEvent> events;
  InitSummary init;
  Matrix codes;                        // K*alpha x N, against the returned dictionary
  std::vector<double> sample_residuals;  // relative, per sample
  bool converged = false;              // objective reached zero within coding_tol
  bool underdetermined = false;        // N < K*alpha
};

// Codes every column of samples against B (parallel over samples).
Matrix code_samples(const BlockDict& B, const Matrix& samples, int s, double tol,
                    std::uint64_t exhaustive_fallback_cap);

namespace reference {
Matrix code_samples_serial(const BlockDict& B, const Matrix& samples, int s, double tol,
                           std::uint64_t exhaustive_fallback_cap);
}  // namespace reference

// Block-MOD alternating minimization: code all samples, then refit all used
// blocks jointly by least squares and re-orthonormalize each block. Blocks no
// sample uses are reseeded from the worst-coded sample.
LearnResult learn_dictionary(const Matrix& samples, const BlockStructure& structure,
                             const LearnerOptions& options,
                             const std::optional<Matrix>& initial = std::nullopt);

}  // namespace blockacs
