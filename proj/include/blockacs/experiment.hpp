#pragma once

#include "blockacs/equivalence.hpp"
#include "blockacs/generate.hpp"
#include "blockacs/learn.hpp"
#include "blockacs/rip.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blockacs {

struct Tolerances {
  double rank = kRankTolerance;
  double certificate = kCertificateTolerance;
  double coding = kCodingTolerance;
};

struct ExperimentConfig {
  BlockStructure structure{6, 2, 1, 2};
  Index ambient_dim = 16;
  int n_samples = 300;
  std::uint64_t seed = 0;
  double noise_level = 0.0;
  int learner_iterations = 30;
  Tolerances tolerances;
  bool rip_exact = true;  // "exact" or "sampled"
  std::uint64_t rip_samples = 10'000;
  DictionaryMode dictionary_mode = DictionaryMode::per_block_orthonormal;
  double coefficient_scale = 1.0;
  LearnerInit learner_init = LearnerInit::span_intersection;
  int init_trials = 100'000;
  int max_dictionary_retries = 1000;

  // Throws ArgumentError on violated invariants (P >= s*alpha, n_samples >= 1, ...).
  void validate() const;
};

struct StageError {
  std::string stage;
  std::string kind;
  std::string message;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::optional<GeneratedDictionary> generated;
  std::optional<LearnResult> learned;
  std::optional<EquivalenceCertificate> certificate;
  std::vector<StageError> errors;
  double wall_clock_seconds = 0.0;

  bool hypothesis_violation() const;
  bool internal_error() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace blockacs
