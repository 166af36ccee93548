#include "blockacs/rip.hpp"

#include "blockacs/combinatorics.hpp"
#include "blockacs/errors.hpp"
#include "blockacs/generate.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace blockacs {

std::string_view to_string(RipMode mode) {
  return mode == RipMode::exact_enumeration ? "exact-enumeration" : "sampled-lower-bound";
}

double rip_constant_for_support(const BlockDict& A, const SupportSet& T) {
  if (T.empty()) throw ArgumentError("RIP constant needs a nonempty support");
  const Matrix AT = A.restrict(T);
  const Matrix gram = AT.transpose() * AT;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();  // ascending
  return std::max(ev(ev.size() - 1) - 1.0, 1.0 - ev(0));
}

namespace {

void check_level(const BlockDict& A, int t) {
  if (t < 1 || t > A.num_blocks()) {
    throw ArgumentError("RIP level t=" + std::to_string(t) + " outside 1.." +
                        std::to_string(A.num_blocks()));
  }
}

// First support attaining the max wins.
RipReport reduce(const std::vector<SupportSet>& supports, const std::vector<double>& deltas,
                 int t, RipMode mode) {
  RipReport report;
  report.level = t;
  report.mode = mode;
  report.supports_examined = supports.size();
  std::size_t best = 0;
  for (std::size_t k = 1; k < deltas.size(); ++k) {
    if (deltas[k] > deltas[best]) best = k;
  }
  report.delta = deltas[best];
  report.worst_support = supports[best];
  return report;
}

std::vector<double> evaluate_parallel(const BlockDict& A, const std::vector<SupportSet>& supports) {
  std::vector<double> deltas(supports.size());
  const auto n = static_cast<std::ptrdiff_t>(supports.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    deltas[static_cast<std::size_t>(k)] = rip_constant_for_support(A, supports[static_cast<std::size_t>(k)]);
  }
  return deltas;
}

}  // namespace

RipReport rip_constant_exact(const BlockDict& A, int t, std::uint64_t cap) {
  check_level(A, t);
  require_enumerable(binomial(A.num_blocks(), t), cap, "exact RIP enumeration");
  const auto supports = enumerate_supports(A.num_blocks(), t);
  return reduce(supports, evaluate_parallel(A, supports), t, RipMode::exact_enumeration);
}

RipReport rip_lower_bound_sampled(const BlockDict& A, int t, std::uint64_t n_samples,
                                  std::uint64_t seed) {
  check_level(A, t);
  if (n_samples < 1) throw ArgumentError("sampled RIP needs at least one sample");
  const int K = A.num_blocks();
  std::vector<SupportSet> supports;
  if (n_samples >= binomial(K, t)) {
    supports = enumerate_supports(K, t);
  } else {
    Rng rng(seed);
    std::set<SupportSet> drawn;
    for (std::uint64_t k = 0; k < n_samples; ++k) drawn.insert(draw_support(K, t, rng));
    supports.assign(drawn.begin(), drawn.end());
  }
  return reduce(supports, evaluate_parallel(A, supports), t, RipMode::sampled_lower_bound);
}

namespace reference {

RipReport rip_constant_exact_serial(const BlockDict& A, int t, std::uint64_t cap) {
  check_level(A, t);
  require_enumerable(binomial(A.num_blocks(), t), cap, "exact RIP enumeration");
  const auto supports = enumerate_supports(A.num_blocks(), t);
  std::vector<double> deltas;
  deltas.reserve(supports.size());
  for (const auto& T : supports) deltas.push_back(rip_constant_for_support(A, T));
  return reduce(supports, deltas, t, RipMode::exact_enumeration);
}

}  // namespace reference

}  // namespace blockacs
