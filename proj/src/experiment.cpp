#include "blockacs/experiment.hpp"

#include "blockacs/combinatorics.hpp"
#include "blockacs/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace blockacs {

void ExperimentConfig::validate() const {
  structure.validate();
  if (ambient_dim < static_cast<Index>(structure.s) * structure.alpha) {
    throw ArgumentError("ambient_dim must be >= s*alpha");
  }
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  if (learner_iterations < 0) throw ArgumentError("learner_iterations must be >= 0");
  if (!(noise_level >= 0.0)) throw ArgumentError("noise_level must be >= 0");
  if (!(tolerances.rank > 0.0) || !(tolerances.certificate > 0.0) || !(tolerances.coding > 0.0)) {
    throw ArgumentError("tolerances must be positive");
  }
  if (rip_samples < 1) throw ArgumentError("rip_samples must be >= 1");
  if (!(coefficient_scale > 0.0)) throw ArgumentError("coefficient_scale must be positive");
  if (init_trials < 0) throw ArgumentError("init_trials must be >= 0");
  if (max_dictionary_retries < 0) throw ArgumentError("max_dictionary_retries must be >= 0");
}

bool ExperimentReport::hypothesis_violation() const {
  return std::any_of(errors.begin(), errors.end(),
                     [](const StageError& e) { return e.kind == "hypothesis-violation"; });
}

bool ExperimentReport::internal_error() const {
  return std::any_of(errors.begin(), errors.end(), [](const StageError& e) { return e.kind == "internal"; });
}

namespace {

std::string kind_of(const std::exception& e) {
  if (dynamic_cast<const HypothesisViolation*>(&e)) return "hypothesis-violation";
  if (dynamic_cast<const CapacityError*>(&e)) return "capacity";
  if (dynamic_cast<const ArgumentError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
      dynamic_cast<const RangeError*>(&e)) {
    return "argument";
  }
  if (dynamic_cast<const RankError*>(&e)) return "rank";
  return "internal";
}

// Codes for all samples; beta > 1 samples are split into beta columns that
// share one support.
Matrix synthesize_codes(const ExperimentConfig& cfg) {
  const BlockStructure& st = cfg.structure;
  const std::uint64_t seed = derive_seed(cfg.seed, 2);
  if (st.beta == 1) return stack_codes(gen_codes(st, cfg.n_samples, seed, cfg.coefficient_scale));

  Rng rng(seed);
  Matrix X(st.dim(), static_cast<Index>(cfg.n_samples) * st.beta);
  for (int n = 0; n < cfg.n_samples; ++n) {
    const SupportSet T = draw_support(st.K, st.s, rng);
    Matrix code(st.dim(), st.beta);
    for (int c = 0; c < st.beta; ++c) code.col(c) = draw_code_on_support(st, T, rng, cfg.coefficient_scale);
    const auto columns = split_columns(code, st);
    for (int c = 0; c < st.beta; ++c) {
      X.col(static_cast<Index>(n) * st.beta + c) = columns[static_cast<std::size_t>(c)];
    }
  }
  return X;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;
  std::string stage = "config";
  try {
    config.validate();

    stage = "generate";
    BlockStructure st = config.structure;
    RipRequirement req;
    req.level = std::min(2 * st.s, st.K);
    req.exact = config.rip_exact;
    req.samples = config.rip_samples;
    req.max_retries = config.max_dictionary_retries;
    report.generated = gen_rip_dictionary(config.ambient_dim, st, derive_seed(config.seed, 1),
                                          config.dictionary_mode, req);
    const BlockDict& A = report.generated->dict;

    const Matrix X = synthesize_codes(config);
    Matrix Y = A.matrix() * X;
    if (config.noise_level > 0.0) {
      Rng rng(derive_seed(config.seed, 3));
      std::normal_distribution<double> normal(0.0, config.noise_level);
      for (Index c = 0; c < Y.cols(); ++c) {
        for (Index r = 0; r < Y.rows(); ++r) Y(r, c) += normal(rng);
      }
    }

    stage = "learn";
    LearnerOptions opt;
    opt.iterations = config.learner_iterations;
    opt.seed = derive_seed(config.seed, 4);
    opt.init = config.learner_init;
    opt.init_trials = config.init_trials;
    opt.coding_tol = config.tolerances.coding;
    opt.rank_tol = config.tolerances.rank;
    if (config.noise_level > 0.0) {
      // Inlier band for noisy samples: a few noise standard deviations per unit sample.
      const double rms = Y.norm() / std::sqrt(static_cast<double>(Y.cols()));
      const double spread = std::sqrt(static_cast<double>(config.ambient_dim));
      opt.init_inlier_tol = std::max(opt.init_inlier_tol, 3.0 * config.noise_level * spread / rms);
    }
    st.beta = 1;
    report.learned = learn_dictionary(Y, st, opt);

    stage = "certify";
    report.certificate = recover_equivalence(A, BlockDict(A.structure(), report.learned->dictionary),
                                             config.tolerances.certificate);
  } catch (const std::exception& e) {
    report.errors.push_back(StageError{stage, kind_of(e), e.what()});
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace blockacs
