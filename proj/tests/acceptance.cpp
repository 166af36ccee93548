// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "blockacs/coding.hpp"
#include "blockacs/combinatorics.hpp"
#include "blockacs/equivalence.hpp"
#include "blockacs/experiment.hpp"
#include "blockacs/generate.hpp"
#include "blockacs/report_json.hpp"
#include "blockacs/rip.hpp"
#include "blockacs/subspace.hpp"
#include "blockacs/transform.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace blockacs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

BlockDict rip_dictionary(Index P, const BlockStructure& st, std::uint64_t seed) {
  RipRequirement req;
  req.level = std::min(2 * st.s, st.K);
  return gen_rip_dictionary(P, st, seed, DictionaryMode::per_block_orthonormal, req).dict;
}

// The shared family for the first two criteria.
const BlockStructure kRoundTrip{6, 2, 1, 2};

BlockDict round_trip_dictionary(std::uint64_t k) { return rip_dictionary(16, kRoundTrip, derive_seed(k, 1)); }

Outcome round_trip() {
  int ok = 0;
  double worst_d = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const BlockDict A = round_trip_dictionary(k);
    const BlockTransform t = random_block_transform(kRoundTrip, derive_seed(k, 5), 10.0);
    const BlockDict B = inverse_transform(A, t.perm, t.diagonal);
    const EquivalenceCertificate c = recover_equivalence(A, B);
    double d_err = 0.0;
    if (c.status == EquivalenceStatus::equivalent) {
      for (int i = 0; i < kRoundTrip.K; ++i) {
        d_err = std::max(d_err, (c.diagonal.blocks[i] - t.diagonal.blocks[i]).cwiseAbs().maxCoeff());
      }
    }
    worst_d = std::max(worst_d, d_err);
    if (c.status == EquivalenceStatus::equivalent && c.permutation == t.perm && d_err < 1e-7) ++ok;
  }
  return {ok == 100, std::to_string(ok) + "/100 recovered, max D error " + fmt(worst_d)};
}

Outcome lemmas() {
  int l1 = 0, l2 = 0;
  const auto supports = enumerate_supports(kRoundTrip.K, kRoundTrip.s);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const BlockDict A = round_trip_dictionary(k);
    l1 += check_lemma1(A, 2);
    bool all = true;
    for (const auto& S : supports)
      for (const auto& S2 : supports) all = all && check_lemma2(A, S, S2);
    l2 += all;
  }
  return {l1 == 100 && l2 == 100,
          "first lemma " + std::to_string(l1) + "/100, second lemma " + std::to_string(l2) + "/100 (225 pairs each)"};
}

Outcome rip_oracle() {
  double worst = 0.0;
  bool bound = true;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const int K = 3 + static_cast<int>(k % 4);
    const int alpha = 1 + static_cast<int>(k % 3);
    const int t = 1 + static_cast<int>(k % static_cast<std::uint64_t>(K));
    const BlockDict A = gen_dictionary(16, {K, alpha, 1, 1}, derive_seed(k, 1),
                                       k % 2 ? DictionaryMode::gaussian : DictionaryMode::per_block_orthonormal);
    const RipReport exact = rip_constant_exact(A, t);
    worst = std::max(worst, std::abs(exact.delta - oracle::brute_force_rip(A.matrix(), alpha, t)));
    const RipReport sampled = rip_lower_bound_sampled(A, t, 3, k);
    bound = bound && sampled.delta <= exact.delta;
  }
  return {worst < 1e-12 && bound,
          "max |exact - brute force| " + fmt(worst) + ", sampled <= exact on all: " + (bound ? "yes" : "no")};
}

Outcome coding_uniqueness() {
  constexpr Index kDims[] = {16, 32, 64, 128};
  int exact_ok = 0, subset = 0, agree = 0;
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const BlockStructure st{6, 2, 1, 1 + static_cast<int>(k % 2)};
    const Index P = kDims[(k / 2) % 4];
    RipRequirement req;
    req.level = 2 * st.s;
    const GeneratedDictionary g = gen_rip_dictionary(P, st, derive_seed(k, 1), DictionaryMode::per_block_orthonormal, req);
    Rng rng(derive_seed(k, 2));
    const SupportSet S = draw_support(st.K, st.s, rng);
    const Vector x = draw_code_on_support(st, S, rng);
    const Vector y = g.dict.matrix() * x;
    const CodingResult oracle_code = exhaustive_code(g.dict, y, st.s);
    const double err = (oracle_code.code.values - x).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    exact_ok += err < 1e-8;
    if (g.rip.delta < 0.5) {
      ++subset;
      agree += block_omp(g.dict, y, st.s).code.support == oracle_code.code.support;
    }
  }
  const double rate = subset ? static_cast<double>(agree) / subset : 0.0;
  return {exact_ok == 1000 && subset > 0 && rate >= 0.95,
          "oracle exact " + std::to_string(exact_ok) + "/1000 (max error " + fmt(worst) + "), greedy agrees on " +
              std::to_string(agree) + "/" + std::to_string(subset) + " with delta < 0.5"};
}

Outcome kappa_consistency() {
  const BlockStructure st{5, 2, 1, 2};
  int ok = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const BlockDict A = rip_dictionary(16, st, derive_seed(k, 1));
    const BlockTransform t = random_block_transform(st, derive_seed(k, 5));
    const BlockDict B = inverse_transform(A, t.perm, t.diagonal);
    bool good = true;
    for (const auto& S : enumerate_supports(st.K, st.s)) {
      good = good && construct_kappa(A, B, S, 8, derive_seed(k, 6)).consistent;
    }
    for (int i = 0; i < st.K; ++i) {
      const KappaResult single = construct_kappa(A, B, SupportSet({i}, st.K), 8, derive_seed(k, 7));
      good = good && single.consistent && single.kappa == SupportSet({t.perm.pi[i]}, st.K);
    }
    ok += good;
  }
  return {ok == 50, std::to_string(ok) + "/50 seeds consistent on all 10 supports with singletons = pi"};
}

Outcome negative_controls() {
  int replaced_ok = 0, random_ok = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const BlockDict A = round_trip_dictionary(k);
    const int j = static_cast<int>(k % static_cast<std::uint64_t>(kRoundTrip.K));
    Matrix m = A.matrix();
    m.middleCols(kRoundTrip.offset(j), kRoundTrip.alpha) =
        gen_dictionary(16, {1, 2, 1, 1}, derive_seed(k, 8), DictionaryMode::per_block_orthonormal).matrix();
    const TheoremInstanceReport r = verify_theorem_instance(A, BlockDict::from_matrix(m, 2), 2, 8, derive_seed(k, 6));
    bool flagged = !r.hypothesis_holds;
    for (const auto& c : r.supports) {
      if (c.support.contains(j)) flagged = flagged && c.violation;
    }
    replaced_ok += flagged;

    const BlockDict B = rip_dictionary(16, kRoundTrip, derive_seed(k, 9));
    random_ok += recover_equivalence(A, B).status == EquivalenceStatus::not_equivalent;
  }
  return {replaced_ok == 50 && random_ok == 50,
          "replaced block flagged " + std::to_string(replaced_ok) + "/50, random B not-equivalent " +
              std::to_string(random_ok) + "/50"};
}

Outcome end_to_end() {
  int ok = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    ExperimentConfig cfg;
    cfg.seed = k;
    const ExperimentReport r = run_experiment(cfg);
    ok += r.certificate && r.certificate->status == EquivalenceStatus::equivalent;
  }
  const double rate = ok / 50.0;
  return {rate >= 0.6, std::to_string(ok) + "/50 seeds equivalent (" + fmt(100.0 * rate) + "%)"};
}

std::string run_cli(const std::string& args, int& status) {
  const std::string cmd = std::string(BLOCKACS_CLI_PATH) + " " + args;
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int raw = pclose(p);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

Outcome determinism() {
  std::ofstream("acceptance_config.json") << R"({"seed": 11, "n_samples": 300, "learner_iterations": 30})";
  int s1 = 0, s2 = 0;
  const std::string a = run_cli("experiment --config acceptance_config.json", s1);
  const std::string b = run_cli("experiment --config acceptance_config.json", s2);
  if (s1 != 0 || s2 != 0) return {false, "cli exited with " + std::to_string(s1) + " and " + std::to_string(s2)};
  Json ja = Json::parse(a), jb = Json::parse(b);
  ja.erase("wall_clock_seconds");
  jb.erase("wall_clock_seconds");
  const bool same = ja.dump() == jb.dump();
  return {same, same ? "reports identical apart from wall_clock_seconds" : "reports differ"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"round-trip certificate", round_trip},
      {"lemma predicates", lemmas},
      {"RIP oracle agreement", rip_oracle},
      {"coding uniqueness under RIP", coding_uniqueness},
      {"kappa consistency", kappa_consistency},
      {"negative controls", negative_controls},
      {"end-to-end learning", end_to_end},
      {"determinism", determinism},
  };
  int failures = 0, index = 1;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << index++ << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail
              << " [" << fmt(secs) << " s]" << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
