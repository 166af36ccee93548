#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blockacs/combinatorics.hpp"
#include "blockacs/equivalence.hpp"
#include "blockacs/errors.hpp"
#include "blockacs/experiment.hpp"
#include "blockacs/generate.hpp"
#include "blockacs/learn.hpp"
#include "blockacs/report_json.hpp"
#include "blockacs/rip.hpp"

#include "oracles.hpp"

using namespace blockacs;

namespace {

struct Instance {
  BlockDict A;
  Matrix Y;
};

Instance make_instance(std::uint64_t seed, int n = 300) {
  const BlockStructure st{6, 2, 1, 2};
  RipRequirement req;
  req.level = 4;
  BlockDict A = gen_rip_dictionary(16, st, seed, DictionaryMode::per_block_orthonormal, req).dict;
  const auto codes = gen_codes(st, n, seed + 1);
  Matrix Y = A.matrix() * stack_codes(codes);
  return {std::move(A), std::move(Y)};
}

}  // namespace

TEST_CASE("dictionary generation") {
  const BlockStructure st{6, 2, 1, 2};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BlockDict A = gen_dictionary(16, st, seed, DictionaryMode::per_block_orthonormal);
    for (int i = 0; i < 6; ++i) {
      const Matrix G = Matrix(A.block(i)).transpose() * Matrix(A.block(i));
      CHECK((G - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(oracle::gauss_rank(Matrix(A.block(i))) == 2);
    }
  }
  CHECK(gen_dictionary(16, st, 5, DictionaryMode::gaussian).matrix() ==
        gen_dictionary(16, st, 5, DictionaryMode::gaussian).matrix());
  CHECK(gen_dictionary(16, st, 5, DictionaryMode::gaussian).matrix() !=
        gen_dictionary(16, st, 6, DictionaryMode::gaussian).matrix());
  CHECK_THROWS_AS(gen_dictionary(1, st, 0, DictionaryMode::gaussian), ArgumentError);
  CHECK(parse_dictionary_mode("gaussian") == DictionaryMode::gaussian);
  CHECK(to_string(DictionaryMode::per_block_orthonormal) == "per-block-orthonormal");
  CHECK_THROWS_AS(parse_dictionary_mode("other"), ArgumentError);
}

TEST_CASE("RIP-checked generation") {
  const BlockStructure st{6, 2, 1, 2};
  RipRequirement req;
  req.level = 4;
  const GeneratedDictionary g = gen_rip_dictionary(16, st, 7, DictionaryMode::gaussian, req);
  CHECK(g.rip.delta < 1.0);
  CHECK(g.seed_used == 7 + static_cast<std::uint64_t>(g.retries));
  CHECK(g.dict.matrix() == gen_dictionary(16, st, g.seed_used, DictionaryMode::gaussian).matrix());
  CHECK(rip_constant_exact(g.dict, 4).delta == g.rip.delta);
  for (int r = 0; r < g.retries; ++r) {
    CHECK(rip_constant_exact(gen_dictionary(16, st, 7 + r, DictionaryMode::gaussian), 4).delta >= 1.0);
  }

  RipRequirement hopeless = req;
  hopeless.max_retries = 1;
  // Four blocks of width 2 cannot be independent in R^7, so delta_4 >= 1 always.
  CHECK_THROWS_AS(gen_rip_dictionary(7, {6, 2, 1, 2}, 0, DictionaryMode::gaussian, hopeless),
                  HypothesisViolation);
}

TEST_CASE("code generation") {
  const BlockStructure st{6, 2, 1, 2};
  const auto codes = gen_codes(st, 200, 3);
  REQUIRE(codes.size() == 200);
  for (const auto& c : codes) {
    CHECK(c.support.size() == 2);
    for (int i : c.support.indices()) {
      for (int k = 0; k < 2; ++k) {
        const double v = std::abs(c.values(2 * i + k));
        CHECK(v >= 0.1);
        CHECK(v <= 1.0);
      }
    }
  }
  for (const auto& c : gen_codes({4, 2, 1, 4}, 20, 1)) CHECK(c.support.size() == 4);
  const Matrix X = stack_codes(codes);
  CHECK(X.rows() == 12);
  CHECK(X.cols() == 200);
  CHECK(stack_codes(gen_codes(st, 50, 9)) == stack_codes(gen_codes(st, 50, 9)));

  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const SupportSet S = draw_support(9, 3, rng);
    CHECK(S.size() == 3);
  }
  const Matrix O = random_orthogonal(5, rng);
  CHECK((O.transpose() * O - Matrix::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("sample coding, parallel and serial") {
  const Instance inst = make_instance(2, 100);
  const BlockDict A = BlockDict(inst.A.structure().with_sparsity(2), inst.A.matrix());
  const Matrix p = code_samples(A, inst.Y, 2, kCodingTolerance, 5000);
  const Matrix s = reference::code_samples_serial(A, inst.Y, 2, kCodingTolerance, 5000);
  CHECK(p == s);
  CHECK((A.matrix() * p - inst.Y).norm() < 1e-10 * inst.Y.norm());
}

TEST_CASE("learner fixed point") {
  const Instance inst = make_instance(1);
  LearnerOptions opt;
  const LearnResult r = learn_dictionary(inst.Y, {6, 2, 1, 2}, opt, inst.A.matrix());
  REQUIRE_FALSE(r.objective.empty());
  CHECK(r.objective.front() < 1e-20);
  CHECK(r.converged);
  CHECK(r.dictionary == inst.A.matrix());
  CHECK(r.events.empty());
}

TEST_CASE("learner objective is non-increasing") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Instance inst = make_instance(seed);
    for (LearnerInit init : {LearnerInit::span_intersection, LearnerInit::samples}) {
      LearnerOptions opt;
      opt.seed = seed;
      opt.init = init;
      opt.iterations = 15;
      const LearnResult r = learn_dictionary(inst.Y, {6, 2, 1, 2}, opt);
      CHECK(r.objective.size() <= 16);
      for (std::size_t k = 1; k < r.objective.size(); ++k) {
        bool reseeded = false;
        for (const auto& e : r.events) reseeded |= e.iteration == static_cast<int>(k) - 1 || e.iteration == static_cast<int>(k);
        if (!reseeded) CHECK(r.objective[k] <= r.objective[k - 1] * (1.0 + 1e-12) + 1e-24);
      }
      for (const auto& e : r.events) CHECK(e.kind == "dead-block-reseed");
    }
  }
}

TEST_CASE("learner recovers the dictionary") {
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = make_instance(seed + 10);
    LearnerOptions opt;
    opt.seed = seed;
    const LearnResult r = learn_dictionary(inst.Y, {6, 2, 1, 2}, opt);
    const auto c = recover_equivalence(inst.A, BlockDict::from_matrix(r.dictionary, 2));
    recovered += c.status == EquivalenceStatus::equivalent;
  }
  CHECK(recovered >= 3);
}

TEST_CASE("learner is deterministic and flags under-determination") {
  const Instance inst = make_instance(3, 1);
  LearnerOptions opt;
  opt.seed = 5;
  opt.iterations = 5;
  const LearnResult a = learn_dictionary(inst.Y, {6, 2, 1, 2}, opt);
  const LearnResult b = learn_dictionary(inst.Y, {6, 2, 1, 2}, opt);
  CHECK(a.underdetermined);
  CHECK(a.dictionary == b.dictionary);
  CHECK(a.objective == b.objective);
  CHECK(recover_equivalence(inst.A, BlockDict::from_matrix(a.dictionary, 2)).status !=
        EquivalenceStatus::equivalent);

  CHECK_THROWS_AS(learn_dictionary(inst.Y, {6, 2, 2, 2}, opt), ArgumentError);
  CHECK(parse_learner_init("samples") == LearnerInit::samples);
  CHECK_THROWS_AS(parse_learner_init("bogus"), ArgumentError);
}

TEST_CASE("experiment pipeline") {
  ExperimentConfig cfg;
  cfg.seed = 1;
  const ExperimentReport r = run_experiment(cfg);
  CHECK(r.errors.empty());
  REQUIRE(r.generated.has_value());
  REQUIRE(r.learned.has_value());
  REQUIRE(r.certificate.has_value());
  CHECK(r.generated->rip.delta < 1.0);

  const Json j = to_json(r);
  for (const char* key : {"config", "rip", "dictionary", "trace", "coding_residuals", "certificate", "errors",
                          "wall_clock_seconds"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["trace"]["objective"].size() == r.learned->objective.size());
  CHECK(to_json(run_experiment(cfg), false) == to_json(r, false));
  CHECK_FALSE(to_json(r, false).contains("wall_clock_seconds"));

  ExperimentConfig noisy = cfg;
  noisy.noise_level = 0.05;
  const ExperimentReport n = run_experiment(noisy);
  REQUIRE(n.learned.has_value());
  CHECK(n.learned->objective.back() > r.learned->objective.back());

  ExperimentConfig wide = cfg;
  wide.structure.beta = 2;
  wide.n_samples = 150;
  const ExperimentReport w = run_experiment(wide);
  REQUIRE(w.learned.has_value());
  CHECK(w.learned->codes.cols() == 300);
}

TEST_CASE("experiment failures are reported by stage") {
  ExperimentConfig small;
  small.ambient_dim = 7;
  small.max_dictionary_retries = 2;
  const ExperimentReport r = run_experiment(small);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].stage == "generate");
  CHECK(r.hypothesis_violation());
  CHECK_FALSE(r.internal_error());

  ExperimentConfig bad;
  bad.structure.s = 9;
  const ExperimentReport b = run_experiment(bad);
  REQUIRE(b.errors.size() == 1);
  CHECK(b.errors[0].stage == "config");
  CHECK(b.errors[0].kind == "argument");
}

TEST_CASE("config JSON") {
  const Json doc = Json::parse(R"({
    "structure": {"K": 5, "alpha": 3, "beta": 1, "s": 2},
    "ambient_dim": 20, "n_samples": 120, "seed": 9, "noise_level": 0.0,
    "learner_iterations": 12, "tolerances": {"rank": 1e-8, "certificate": 1e-6, "coding": 1e-10},
    "rip_mode": "sampled", "rip_samples": 50, "dictionary_mode": "gaussian",
    "coefficient_scale": 2.0, "learner_init": "samples", "init_trials": 10,
    "max_dictionary_retries": 5
  })");
  const ExperimentConfig c = experiment_config_from_json(doc);
  CHECK(c.structure == BlockStructure{5, 3, 1, 2});
  CHECK(c.ambient_dim == 20);
  CHECK(c.seed == 9);
  CHECK_FALSE(c.rip_exact);
  CHECK(c.dictionary_mode == DictionaryMode::gaussian);
  CHECK(c.learner_init == LearnerInit::samples);
  CHECK(c.max_dictionary_retries == 5);
  CHECK(experiment_config_from_json(to_json(c)).structure == c.structure);
  CHECK(to_json(experiment_config_from_json(to_json(c))) == to_json(c));

  CHECK(experiment_config_from_json(Json::object()).n_samples == 300);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"unknown": 1})")), ArgumentError);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"seed": "x"})")), ArgumentError);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"structure": {"K": 2, "s": 3}})")), ArgumentError);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"rip_mode": "fast"})")), ArgumentError);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse("[1]")), ArgumentError);
}

TEST_CASE("trace CSV") {
  LearnResult r;
  r.objective = {2.0, 0.5};
  CHECK(trace_csv(r).rfind("iteration,objective\n0,", 0) == 0);
}
