#include "blockacs/equivalence.hpp"

#include "blockacs/coding.hpp"
#include "blockacs/combinatorics.hpp"
#include "blockacs/errors.hpp"
#include "blockacs/generate.hpp"
#include "blockacs/subspace.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace blockacs {

std::string_view to_string(EquivalenceStatus status) {
  switch (status) {
    case EquivalenceStatus::equivalent: return "equivalent";
    case EquivalenceStatus::not_equivalent: return "not-equivalent";
    case EquivalenceStatus::ambiguous: return "ambiguous";
  }
  return "unknown";
}

namespace {

void require_compatible(const BlockDict& A, const BlockDict& B) {
  if (A.ambient_dim() != B.ambient_dim()) throw ShapeError("dictionaries have different ambient dimensions");
  if (A.structure().K != B.structure().K || A.structure().alpha != B.structure().alpha) {
    throw ShapeError("dictionaries have different block structures");
  }
}

std::vector<SubspaceBasis> block_bases(const BlockDict& D, double tol) {
  std::vector<SubspaceBasis> out;
  out.reserve(static_cast<std::size_t>(D.num_blocks()));
  for (int i = 0; i < D.num_blocks(); ++i) out.push_back(orthonormal_basis(D.block(i), tol));
  return out;
}

double relative_frobenius(const Matrix& target, const Matrix& diff) {
  const double n = target.norm();
  return n > 0.0 ? diff.norm() / n : diff.norm();
}

}  // namespace

BlockMatch match_blocks(const BlockDict& A, const BlockDict& B, double tol) {
  require_compatible(A, B);
  const int K = A.num_blocks();
  const int a = A.structure().alpha;
  const auto bb = block_bases(B, kRankTolerance);
  for (int j = 0; j < K; ++j) {
    if (bb[static_cast<std::size_t>(j)].dim() < a) {
      throw RankError("block " + std::to_string(j + 1) + " of B has rank " +
                      std::to_string(bb[static_cast<std::size_t>(j)].dim()) + " < alpha");
    }
  }
  const auto ab = block_bases(A, kRankTolerance);

  BlockMatch m;
  m.pi.assign(static_cast<std::size_t>(K), -1);
  std::vector<std::vector<int>> hits(static_cast<std::size_t>(K));
  const auto n = static_cast<std::ptrdiff_t>(K);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (int j = 0; j < K; ++j) {
      if (spans_equal(ab[static_cast<std::size_t>(i)], bb[static_cast<std::size_t>(j)], tol)) {
        hits[static_cast<std::size_t>(i)].push_back(j);
      }
    }
  }

  std::vector<int> claims(static_cast<std::size_t>(K), 0);
  for (int i = 0; i < K; ++i) {
    const auto& h = hits[static_cast<std::size_t>(i)];
    if (h.empty()) {
      m.unmatched.push_back(i);
    } else if (h.size() > 1) {
      m.ambiguous.push_back(i);
    } else {
      m.pi[static_cast<std::size_t>(i)] = h.front();
      ++claims[static_cast<std::size_t>(h.front())];
    }
  }
  for (int j = 0; j < K; ++j) {
    if (claims[static_cast<std::size_t>(j)] > 1) m.collisions.push_back(j);
  }

  if (!m.ambiguous.empty()) {
    m.status = EquivalenceStatus::ambiguous;
  } else if (!m.unmatched.empty() || !m.collisions.empty()) {
    m.status = EquivalenceStatus::not_equivalent;
  } else {
    m.status = EquivalenceStatus::equivalent;
  }
  return m;
}

BlockSolve solve_block_transform(const Matrix& A_i, const Matrix& B_j, double rank_tol) {
  if (A_i.rows() != B_j.rows() || A_i.cols() != B_j.cols()) {
    throw ShapeError("block transform: A_i and B_j shapes differ");
  }
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(rank_tol);
  qr.compute(B_j);
  if (qr.rank() < B_j.cols()) {
    throw RankError("block transform: B_j has rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(B_j.cols()));
  }
  BlockSolve out;
  out.D = qr.solve(A_i);
  out.residual = relative_frobenius(A_i, A_i - B_j * out.D);
  BlockDiagonal single{BlockStructure{1, static_cast<int>(out.D.rows()), 1, 1}, {out.D}};
  out.invertible = single.all_invertible(rank_tol);
  return out;
}

EquivalenceCertificate recover_equivalence(const BlockDict& A, const BlockDict& B, double tol) {
  require_compatible(A, B);
  const auto& st = A.structure();
  EquivalenceCertificate cert;
  cert.permutation = BlockPermutation{st.K, std::vector<int>(static_cast<std::size_t>(st.K), -1)};
  cert.diagonal = BlockDiagonal{st, std::vector<Matrix>(static_cast<std::size_t>(st.K),
                                                        Matrix::Zero(st.alpha, st.alpha))};
  cert.block_residuals.assign(static_cast<std::size_t>(st.K), 1.0);

  try {
    cert.match = match_blocks(A, B, tol);
  } catch (const RankError&) {
    // A rank-deficient block of B cannot carry any block of A.
    cert.status = EquivalenceStatus::not_equivalent;
    cert.residual = 1.0;
    return cert;
  }

  bool invertible = true;
  double worst = 0.0;
  for (int i = 0; i < st.K; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const int j = cert.match.pi[u];
    cert.permutation.pi[u] = j;
    if (j < 0) {
      worst = std::max(worst, 1.0);
      invertible = false;
      continue;
    }
    const BlockSolve solve = solve_block_transform(A.block(i), B.block(j));
    cert.diagonal.blocks[u] = solve.D;
    cert.block_residuals[u] = solve.residual;
    worst = std::max(worst, solve.residual);
    invertible = invertible && solve.invertible;
  }
  cert.residual = worst;

  if (cert.match.status == EquivalenceStatus::ambiguous) {
    cert.status = EquivalenceStatus::ambiguous;
  } else if (cert.match.status == EquivalenceStatus::equivalent && cert.permutation.is_bijection() &&
             invertible && cert.residual <= tol) {
    cert.status = EquivalenceStatus::equivalent;
  } else {
    cert.status = EquivalenceStatus::not_equivalent;
  }
  return cert;
}

namespace {

// Probing without the violation check; construct_kappa and the verifier share it.
KappaResult probe_kappa(const BlockDict& A, const BlockDict& B, const SupportSet& S, int n_probes,
                        std::uint64_t seed, std::uint64_t cap) {
  require_compatible(A, B);
  if (S.empty()) throw ArgumentError("kappa needs a nonempty support");
  for (int i : S.indices()) {
    if (i < 0 || i >= A.num_blocks()) throw ArgumentError("kappa support index outside 1..K");
  }
  if (n_probes < 1) throw ArgumentError("kappa needs at least one probe");

  const int level = static_cast<int>(S.size());
  const BlockStructure st = A.structure().with_sparsity(level);
  Rng rng(seed);
  KappaResult out;
  out.source = S;
  out.probe_supports.reserve(static_cast<std::size_t>(n_probes));
  for (int p = 0; p < n_probes; ++p) {
    const Vector y = A.matrix() * draw_code_on_support(st, S, rng);
    const CodingResult code = exhaustive_code(B, y, level, kCodingTolerance, cap);
    out.max_residual = std::max(out.max_residual, code.residual_norm);
    out.probe_supports.push_back(code.selected);
  }

  // Majority vote; the first support seen wins ties.
  std::map<SupportSet, int> votes;
  for (const auto& T : out.probe_supports) ++votes[T];
  const SupportSet* winner = &out.probe_supports.front();
  for (const auto& T : out.probe_supports) {
    if (votes[T] > votes[*winner]) winner = &T;
  }
  out.kappa = *winner;
  out.agreeing_probes = votes[*winner];
  out.consistent = out.agreeing_probes == n_probes;
  return out;
}

}  // namespace

KappaResult construct_kappa(const BlockDict& A, const BlockDict& B, const SupportSet& S,
                            int n_probes, std::uint64_t seed, double tol, std::uint64_t cap) {
  KappaResult out = probe_kappa(A, B, S, n_probes, seed, cap);
  if (out.max_residual > tol) {
    throw HypothesisViolation("no " + std::to_string(S.size()) +
                              "-block-sparse code in B reproduces probes of span(A_S); worst relative residual " +
                              std::to_string(out.max_residual));
  }
  return out;
}

TheoremInstanceReport verify_theorem_instance(const BlockDict& A, const BlockDict& B, int s,
                                              int n_probes, std::uint64_t seed, double tol,
                                              const VerifyOptions& options) {
  require_compatible(A, B);
  const int K = A.num_blocks();
  if (s < 1 || s > K) throw ArgumentError("verify: s outside 1..K");

  TheoremInstanceReport report;
  report.s = s;
  const int level = std::min(2 * s, K);
  if (binomial(K, level) <= options.rip_cap) {
    report.rip = rip_constant_exact(A, level, options.rip_cap);
  } else {
    report.rip = rip_lower_bound_sampled(A, level, options.rip_samples, derive_seed(seed, 1));
  }
  report.rip_hypothesis = report.rip.delta < 1.0;

  std::vector<SupportSet> family;
  if (binomial(K, s) <= options.max_supports) {
    family = enumerate_supports(K, s);
  } else {
    Rng rng(derive_seed(seed, 2));
    std::set<SupportSet> drawn;
    while (drawn.size() < options.max_supports) drawn.insert(draw_support(K, s, rng));
    family.assign(drawn.begin(), drawn.end());
  }

  const auto probe_one = [&](const SupportSet& S, std::uint64_t stream) {
    const KappaResult k = probe_kappa(A, B, S, n_probes, derive_seed(seed, stream), kEnumerationCap);
    SupportCheck check;
    check.support = S;
    check.max_residual = k.max_residual;
    check.violation = k.max_residual > tol;
    if (!check.violation) {
      check.kappa = k.kappa;
      check.consistent = k.consistent;
    }
    return check;
  };

  report.hypothesis_holds = true;
  for (std::size_t k = 0; k < family.size(); ++k) {
    report.supports.push_back(probe_one(family[k], 100 + k));
    const auto& c = report.supports.back();
    report.hypothesis_holds = report.hypothesis_holds && !c.violation && c.consistent;
  }

  report.certificate = recover_equivalence(A, B, tol);

  report.kappa_singletons.resize(static_cast<std::size_t>(K));
  bool agree = report.certificate.status == EquivalenceStatus::equivalent;
  for (int i = 0; i < K; ++i) {
    const SupportCheck c = probe_one(SupportSet({i}, K), 1'000'000 + static_cast<std::uint64_t>(i));
    if (!c.violation && c.consistent && c.kappa && c.kappa->size() == 1) {
      report.kappa_singletons[static_cast<std::size_t>(i)] = (*c.kappa)[0];
    }
    const auto& ks = report.kappa_singletons[static_cast<std::size_t>(i)];
    agree = agree && ks && *ks == report.certificate.permutation.pi[static_cast<std::size_t>(i)];
  }
  report.agreement = agree;
  return report;
}

}  // namespace blockacs
