// blockacs: command-line front end for the block sparse coding uniqueness tools.
//
// Exit codes: 0 success, 1 internal error, 2 bad arguments, 3 capacity error,
// 4 hypothesis violation.

#include "blockacs/coding.hpp"
#include "blockacs/combinatorics.hpp"
#include "blockacs/equivalence.hpp"
#include "blockacs/errors.hpp"
#include "blockacs/experiment.hpp"
#include "blockacs/generate.hpp"
#include "blockacs/learn.hpp"
#include "blockacs/matrix_io.hpp"
#include "blockacs/report_json.hpp"
#include "blockacs/rip.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace blockacs;

constexpr int kExitInternal = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitHypothesis = 4;

struct Shared {
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
};

void add_shared(CLI::App* cmd, Shared& sh) {
  cmd->add_option("--seed", sh.seed, "Random seed");
  cmd->add_option("--tol", sh.tol, "Tolerance (meaning depends on the command)");
  cmd->add_option("--out", sh.out, "Output path (default: stdout)");
  cmd->add_option("--format", sh.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const Shared& sh, const std::string& text) {
  if (sh.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(sh.out);
  if (!f) throw ArgumentError("cannot write " + sh.out);
  f << text;
}

void emit_json(const Shared& sh, const Json& doc) {
  if (sh.format != "json") throw ArgumentError("this command only writes JSON");
  emit(sh, doc.dump(2) + "\n");
}

std::vector<int> parse_support(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ArgumentError("bad support entry \"" + tok + "\"");
    }
  }
  if (out.empty()) throw ArgumentError("support is empty");
  return out;
}

BlockDict load_dict(const std::string& path, int alpha, int s) {
  BlockDict d = BlockDict::from_matrix(read_matrix_file(path), alpha, 1);
  if (s < 1 || s > d.num_blocks()) throw ArgumentError("s outside 1..K for " + path);
  return BlockDict(d.structure().with_sparsity(s), d.matrix());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block sparse coding uniqueness toolkit"};
  app.require_subcommand(1);

  // gen
  Shared gen_sh;
  Index gen_P = 16;
  BlockStructure gen_st{6, 2, 1, 2};
  int gen_n = 100;
  std::string gen_mode = "per-block-orthonormal";
  bool gen_rip = false;
  bool gen_equiv = false;
  std::string gen_prefix = "instance";
  auto* gen = app.add_subcommand("gen", "Generate a dictionary, codes and samples");
  add_shared(gen, gen_sh);
  gen->add_option("--P", gen_P, "Ambient dimension");
  gen->add_option("--K", gen_st.K, "Number of blocks");
  gen->add_option("--alpha", gen_st.alpha, "Block width");
  gen->add_option("--beta", gen_st.beta, "Code width");
  gen->add_option("--s", gen_st.s, "Block sparsity");
  gen->add_option("--n-samples", gen_n, "Number of samples");
  gen->add_option("--mode", gen_mode, "Dictionary mode")->check(CLI::IsMember({"gaussian", "per-block-orthonormal"}));
  gen->add_flag("--rip-check", gen_rip, "Redraw until the exact RIP constant at level 2s is below 1");
  gen->add_flag("--equivalent", gen_equiv, "Also write B with A = B (P (x) I) D for a random (P, D)");
  gen->add_option("--prefix", gen_prefix, "Output file prefix");

  // rip
  Shared rip_sh;
  std::string rip_dict;
  int rip_alpha = 1;
  int rip_level = 2;
  std::string rip_mode = "exact";
  std::uint64_t rip_samples = 10'000;
  std::uint64_t rip_cap = kEnumerationCap;
  auto* rip = app.add_subcommand("rip", "Block RIP constant of a dictionary");
  add_shared(rip, rip_sh);
  rip->add_option("--dict", rip_dict, "Dictionary matrix file")->required();
  rip->add_option("--alpha", rip_alpha, "Block width");
  rip->add_option("--level", rip_level, "Support size t");
  rip->add_option("--mode", rip_mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  rip->add_option("--samples", rip_samples, "Supports drawn in sampled mode");
  rip->add_option("--cap", rip_cap, "Enumeration cap for exact mode");

  // code
  Shared code_sh;
  std::string code_dict, code_y, code_method = "omp";
  int code_alpha = 1, code_s = 1;
  auto* code = app.add_subcommand("code", "Block-sparse code of measurements");
  add_shared(code, code_sh);
  code->add_option("--dict", code_dict, "Dictionary matrix file")->required();
  code->add_option("--y", code_y, "Measurement matrix file (P x N, one measurement per column)")->required();
  code->add_option("--alpha", code_alpha, "Block width");
  code->add_option("--s", code_s, "Block sparsity");
  code->add_option("--method", code_method, "omp or exhaustive")->check(CLI::IsMember({"omp", "exhaustive"}));

  // equiv
  Shared eq_sh;
  std::string eq_A, eq_B;
  int eq_alpha = 1;
  auto* equiv = app.add_subcommand("equiv", "Recover A = B (P_pi (x) I) D");
  add_shared(equiv, eq_sh);
  equiv->add_option("--A", eq_A, "Dictionary A")->required();
  equiv->add_option("--B", eq_B, "Dictionary B")->required();
  equiv->add_option("--alpha", eq_alpha, "Block width");

  // kappa
  Shared k_sh;
  std::string k_A, k_B, k_support;
  int k_alpha = 1, k_probes = 8;
  auto* kappa = app.add_subcommand("kappa", "Probe the support map kappa for one support of A");
  add_shared(kappa, k_sh);
  kappa->add_option("--A", k_A, "Dictionary A")->required();
  kappa->add_option("--B", k_B, "Dictionary B")->required();
  kappa->add_option("--alpha", k_alpha, "Block width");
  kappa->add_option("--support", k_support, "Comma-separated 1-based block indices")->required();
  kappa->add_option("--probes", k_probes, "Number of random probes");

  // learn
  Shared l_sh;
  std::string l_samples, l_dict_out, l_init = "span-intersection";
  BlockStructure l_st{6, 2, 1, 2};
  int l_iters = 30, l_trials = 100'000;
  auto* learn = app.add_subcommand("learn", "Learn a block dictionary from samples");
  add_shared(learn, l_sh);
  learn->add_option("--samples", l_samples, "Sample matrix file (P x N)")->required();
  learn->add_option("--K", l_st.K, "Number of blocks");
  learn->add_option("--alpha", l_st.alpha, "Block width");
  learn->add_option("--s", l_st.s, "Block sparsity");
  learn->add_option("--iterations", l_iters, "Learner iterations");
  learn->add_option("--init", l_init, "Initialization")->check(CLI::IsMember({"span-intersection", "samples"}));
  learn->add_option("--init-trials", l_trials, "Consensus trials for span-intersection init");
  learn->add_option("--dict-out", l_dict_out, "Where to write the learned dictionary");

  // verify
  Shared v_sh;
  std::string v_A, v_B;
  int v_alpha = 1, v_s = 1, v_probes = 8;
  auto* verify = app.add_subcommand("verify", "Check hypothesis and conclusion on one (A, B) pair");
  add_shared(verify, v_sh);
  verify->add_option("--A", v_A, "Dictionary A")->required();
  verify->add_option("--B", v_B, "Dictionary B")->required();
  verify->add_option("--alpha", v_alpha, "Block width");
  verify->add_option("--s", v_s, "Block sparsity");
  verify->add_option("--probes", v_probes, "Probes per support");

  // experiment
  Shared x_sh;
  std::string x_config;
  auto* experiment = app.add_subcommand("experiment", "Run a full synthetic experiment from a JSON config");
  add_shared(experiment, x_sh);
  experiment->add_option("--config", x_config, "Config JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitBadArgs;
  }

  try {
    if (*gen) {
      gen_st.validate();
      const BlockStructure dict_st = gen_st;
      const std::uint64_t dseed = derive_seed(gen_sh.seed, 1);
      const DictionaryMode mode = parse_dictionary_mode(gen_mode);
      Json summary{{"P", gen_P}, {"K", gen_st.K}, {"alpha", gen_st.alpha}, {"beta", gen_st.beta},
                   {"s", gen_st.s}, {"n_samples", gen_n}, {"mode", gen_mode}};
      std::optional<BlockDict> A;
      if (gen_rip) {
        RipRequirement req;
        req.level = std::min(2 * gen_st.s, gen_st.K);
        GeneratedDictionary g = gen_rip_dictionary(gen_P, dict_st, dseed, mode, req);
        summary["rip"] = to_json(g.rip);
        summary["retries"] = g.retries;
        A = std::move(g.dict);
      } else {
        A = gen_dictionary(gen_P, dict_st, dseed, mode);
      }
      // Codes: beta columns per sample, laid out sample-major.
      Rng rng(derive_seed(gen_sh.seed, 2));
      Matrix X(gen_st.dim(), static_cast<Index>(gen_n) * gen_st.beta);
      for (int n = 0; n < gen_n; ++n) {
        const SupportSet T = draw_support(gen_st.K, gen_st.s, rng);
        for (int c = 0; c < gen_st.beta; ++c) {
          X.col(static_cast<Index>(n) * gen_st.beta + c) = draw_code_on_support(gen_st, T, rng);
        }
      }
      const std::string p = gen_prefix;
      write_matrix_file(p + "_A.txt", A->matrix());
      write_matrix_file(p + "_codes.txt", X);
      write_matrix_file(p + "_samples.txt", A->matrix() * X);
      summary["files"] = Json::array({p + "_A.txt", p + "_codes.txt", p + "_samples.txt"});
      if (gen_equiv) {
        const BlockTransform t = random_block_transform(gen_st, derive_seed(gen_sh.seed, 5));
        write_matrix_file(p + "_B.txt", inverse_transform(*A, t.perm, t.diagonal).matrix());
        Json pi = Json::array();
        for (int j : t.perm.pi) pi.push_back(j + 1);
        summary["files"].push_back(p + "_B.txt");
        summary["transform"] = Json{{"pi", pi}};
      }
      emit_json(gen_sh, summary);
    } else if (*rip) {
      const BlockDict A = load_dict(rip_dict, rip_alpha, 1);
      const RipReport r = rip_mode == "exact" ? rip_constant_exact(A, rip_level, rip_cap)
                                              : rip_lower_bound_sampled(A, rip_level, rip_samples, rip_sh.seed);
      emit_json(rip_sh, to_json(r));
    } else if (*code) {
      const BlockDict A = load_dict(code_dict, code_alpha, code_s);
      const Matrix Y = read_matrix_file(code_y);
      const double tol = code_sh.tol.value_or(kCodingTolerance);
      Json results = Json::array();
      for (Index n = 0; n < Y.cols(); ++n) {
        const CodingResult r = code_method == "omp" ? block_omp(A, Y.col(n), code_s, tol)
                                                    : exhaustive_code(A, Y.col(n), code_s, tol);
        results.push_back(to_json(r));
      }
      emit_json(code_sh, Y.cols() == 1 ? results.front() : results);
    } else if (*equiv) {
      const BlockDict A = load_dict(eq_A, eq_alpha, 1);
      const BlockDict B = load_dict(eq_B, eq_alpha, 1);
      emit_json(eq_sh, to_json(recover_equivalence(A, B, eq_sh.tol.value_or(kCertificateTolerance))));
    } else if (*kappa) {
      const BlockDict A = load_dict(k_A, k_alpha, 1);
      const BlockDict B = load_dict(k_B, k_alpha, 1);
      const SupportSet S = SupportSet::from_one_based(parse_support(k_support), A.num_blocks());
      const double tol = k_sh.tol.value_or(kCertificateTolerance);
      try {
        emit_json(k_sh, to_json(construct_kappa(A, B, S, k_probes, k_sh.seed, tol)));
      } catch (const HypothesisViolation& e) {
        emit_json(k_sh, Json{{"support", to_json(S)}, {"hypothesis_violation", true}, {"message", e.what()}});
        return kExitHypothesis;
      }
    } else if (*learn) {
      const Matrix Y = read_matrix_file(l_samples);
      LearnerOptions opt;
      opt.iterations = l_iters;
      opt.seed = l_sh.seed;
      opt.init = parse_learner_init(l_init);
      opt.init_trials = l_trials;
      opt.coding_tol = l_sh.tol.value_or(kCodingTolerance);
      const LearnResult r = learn_dictionary(Y, l_st, opt);
      if (!l_dict_out.empty()) write_matrix_file(l_dict_out, r.dictionary);
      if (l_sh.format == "csv") {
        emit(l_sh, trace_csv(r));
      } else {
        emit_json(l_sh, learn_trace_json(r));
      }
    } else if (*verify) {
      const BlockDict A = load_dict(v_A, v_alpha, v_s);
      const BlockDict B = load_dict(v_B, v_alpha, v_s);
      emit_json(v_sh, to_json(verify_theorem_instance(A, B, v_s, v_probes, v_sh.seed,
                                                      v_sh.tol.value_or(kCertificateTolerance))));
    } else if (*experiment) {
      std::ifstream f(x_config);
      if (!f) throw ArgumentError("cannot open " + x_config);
      Json doc;
      try {
        doc = Json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("config is not valid JSON: ") + e.what());
      }
      ExperimentConfig cfg = experiment_config_from_json(doc);
      if (x_sh.tol) cfg.tolerances.certificate = *x_sh.tol;
      const ExperimentReport report = run_experiment(cfg);
      if (x_sh.format == "csv") {
        emit(x_sh, report.learned ? trace_csv(*report.learned) : std::string("iteration,objective\n"));
      } else {
        emit_json(x_sh, to_json(report));
      }
      for (const auto& e : report.errors) std::cerr << "blockacs: " << e.stage << ": " << e.message << "\n";
      if (report.hypothesis_violation()) return kExitHypothesis;
      if (report.internal_error()) return kExitInternal;
      for (const auto& e : report.errors) {
        if (e.kind == "capacity") return kExitCapacity;
        if (e.kind == "argument") return kExitBadArgs;
      }
    }
  } catch (const CapacityError& e) {
    std::cerr << "blockacs: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const HypothesisViolation& e) {
    std::cerr << "blockacs: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const ArgumentError& e) {
    std::cerr << "blockacs: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const ShapeError& e) {
    std::cerr << "blockacs: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const RangeError& e) {
    std::cerr << "blockacs: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "blockacs: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
