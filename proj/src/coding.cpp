#include "blockacs/coding.hpp"

#include "blockacs/combinatorics.hpp"
#include "blockacs/errors.hpp"

#include <algorithm>
#include <string>

namespace blockacs {

std::string_view to_string(CodingMethod method) {
  return method == CodingMethod::block_omp ? "block-omp" : "exhaustive-oracle";
}

double relative_residual(const Vector& y, const Vector& fit) {
  const double r = (y - fit).norm();
  const double ny = y.norm();
  return ny > 0.0 ? r / ny : r;
}

Vector solve_on_support(const BlockDict& A, const SupportSet& T, const Vector& y,
                        bool require_full_rank) {
  const Matrix AT = A.restrict(T);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankTolerance);
  cod.compute(AT);
  if (require_full_rank && cod.rank() < AT.cols()) {
    throw RankError("sub-dictionary on " + std::to_string(T.size()) + " blocks has rank " +
                    std::to_string(cod.rank()) + " < " + std::to_string(AT.cols()));
  }
  return cod.solve(y);
}

namespace {

void check_inputs(const BlockDict& A, const Vector& y, int s) {
  if (y.size() != A.ambient_dim()) {
    throw ShapeError("measurement length " + std::to_string(y.size()) + " != ambient dimension " +
                     std::to_string(A.ambient_dim()));
  }
  if (s < 1 || s > A.num_blocks()) {
    throw ArgumentError("sparsity s=" + std::to_string(s) + " outside 1.." + std::to_string(A.num_blocks()));
  }
}

CodingResult zero_code(const BlockDict& A, int s, CodingMethod method) {
  const BlockStructure st = A.structure().with_sparsity(s);
  return CodingResult{BlockSparseVec::from_values(Vector::Zero(st.dim()), st), SupportSet{}, 0.0, method};
}

CodingResult finish(const BlockDict& A, const Vector& y, int s, const SupportSet& T,
                    const Vector& packed, CodingMethod method) {
  const BlockStructure st = A.structure().with_sparsity(s);
  Vector values = scatter_blocks(packed, st, T);
  const double residual = relative_residual(y, A.matrix() * values);
  return CodingResult{BlockSparseVec::from_values(std::move(values), st, 0.0), T, residual, method};
}

struct SupportFit {
  Vector packed;
  double residual = 0.0;
};

SupportFit fit_support(const BlockDict& A, const Vector& y, const SupportSet& T) {
  SupportFit fit;
  fit.packed = solve_on_support(A, T, y, false);
  fit.residual = relative_residual(y, A.restrict(T) * fit.packed);
  return fit;
}

// Lexicographically first support within tol of the best residual.
std::size_t pick_best(const std::vector<SupportFit>& fits, double tol) {
  double best = fits.front().residual;
  for (const auto& f : fits) best = std::min(best, f.residual);
  std::size_t k = 0;
  while (fits[k].residual > best + tol) ++k;
  return k;
}

}  // namespace

CodingResult block_omp(const BlockDict& A, const Vector& y, int s, double tol) {
  check_inputs(A, y, s);
  if (y.norm() == 0.0) return zero_code(A, s, CodingMethod::block_omp);

  const int K = A.num_blocks();
  std::vector<int> chosen;
  SupportSet T;
  Vector packed(0);
  Vector r = y;
  while (static_cast<int>(chosen.size()) < s) {
    if (r.norm() <= tol * y.norm()) break;
    int best = -1;
    double best_corr = -1.0;
    for (int i = 0; i < K; ++i) {
      if (T.contains(i)) continue;
      const double corr = (A.block(i).transpose() * r).norm();
      if (corr > best_corr) {
        best_corr = corr;
        best = i;
      }
    }
    chosen.push_back(best);
    T = SupportSet(chosen, K);
    packed = solve_on_support(A, T, y, true);
    r = y - A.restrict(T) * packed;
  }
  return finish(A, y, s, T, packed, CodingMethod::block_omp);
}

CodingResult exhaustive_code(const BlockDict& A, const Vector& y, int s, double tol,
                             std::uint64_t cap) {
  check_inputs(A, y, s);
  require_enumerable(binomial(A.num_blocks(), s), cap, "exhaustive coding");
  if (y.norm() == 0.0) return zero_code(A, s, CodingMethod::exhaustive_oracle);

  const auto supports = enumerate_supports(A.num_blocks(), s);
  std::vector<SupportFit> fits(supports.size());
  const auto n = static_cast<std::ptrdiff_t>(supports.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto u = static_cast<std::size_t>(k);
    fits[u] = fit_support(A, y, supports[u]);
  }
  const std::size_t best = pick_best(fits, tol);
  return finish(A, y, s, supports[best], fits[best].packed, CodingMethod::exhaustive_oracle);
}

namespace reference {

CodingResult exhaustive_code_serial(const BlockDict& A, const Vector& y, int s, double tol,
                                    std::uint64_t cap) {
  check_inputs(A, y, s);
  require_enumerable(binomial(A.num_blocks(), s), cap, "exhaustive coding");
  if (y.norm() == 0.0) return zero_code(A, s, CodingMethod::exhaustive_oracle);

  const auto supports = enumerate_supports(A.num_blocks(), s);
  std::vector<SupportFit> fits;
  fits.reserve(supports.size());
  for (const auto& T : supports) fits.push_back(fit_support(A, y, T));
  const std::size_t best = pick_best(fits, tol);
  return finish(A, y, s, supports[best], fits[best].packed, CodingMethod::exhaustive_oracle);
}

}  // namespace reference

}  // namespace blockacs
