#include "blockacs/subspace.hpp"

#include "blockacs/combinatorics.hpp"
#include "blockacs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blockacs {

SubspaceBasis orthonormal_basis(const Matrix& M, double tol) {
  if (M.rows() < 1) throw ShapeError("orthonormal_basis: matrix has no rows");
  SubspaceBasis out{M.rows(), Matrix(M.rows(), 0)};
  if (M.cols() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return out;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  out.basis = svd.matrixU().leftCols(rank);
  return out;
}

double sine_tolerance(double tol) {
  const double t = std::clamp(tol, 0.0, 1.0);
  return std::sqrt(t * (2.0 - t));
}

namespace {

void require_same_ambient(Index a, Index b) {
  if (a != b) {
    throw ShapeError("ambient dimensions differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

Matrix residual_of(const SubspaceBasis& q1, const SubspaceBasis& q2) {
  return q2.basis - q1.basis * (q1.basis.transpose() * q2.basis);
}

}  // namespace

Vector principal_sines(const SubspaceBasis& q1, const SubspaceBasis& q2) {
  require_same_ambient(q1.ambient_dim, q2.ambient_dim);
  if (q2.dim() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> svd(residual_of(q1, q2));
  return svd.singularValues();
}

bool spans_equal(const SubspaceBasis& q1, const SubspaceBasis& q2, double tol) {
  require_same_ambient(q1.ambient_dim, q2.ambient_dim);
  if (q1.dim() != q2.dim()) return false;
  if (q1.dim() == 0) return true;
  // Both directions, so the predicate is symmetric in floating point too.
  const double worst = std::max(principal_sines(q1, q2).maxCoeff(), principal_sines(q2, q1).maxCoeff());
  return worst <= sine_tolerance(tol);
}

bool spans_equal(const Matrix& M1, const Matrix& M2, double tol) {
  require_same_ambient(M1.rows(), M2.rows());
  return spans_equal(orthonormal_basis(M1, tol), orthonormal_basis(M2, tol), tol);
}

SubspaceBasis subspace_intersection(const SubspaceBasis& q1, const SubspaceBasis& q2, double tol) {
  require_same_ambient(q1.ambient_dim, q2.ambient_dim);
  SubspaceBasis out{q1.ambient_dim, Matrix(q1.ambient_dim, 0)};
  if (q1.dim() == 0 || q2.dim() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(residual_of(q1, q2), Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();  // descending
  const double limit = sine_tolerance(tol);
  Index first = sv.size();
  while (first > 0 && sv(first - 1) <= limit) --first;
  const Index count = sv.size() - first;
  if (count == 0) return out;
  out.basis = q2.basis * svd.matrixV().rightCols(count);
  return out;
}

SubspaceBasis subspace_intersection(const Matrix& M1, const Matrix& M2, double tol) {
  require_same_ambient(M1.rows(), M2.rows());
  return subspace_intersection(orthonormal_basis(M1, tol), orthonormal_basis(M2, tol), tol);
}

bool check_lemma1(const BlockDict& A, int s, double tol, std::uint64_t cap) {
  if (s < 1 || s > A.num_blocks()) throw ArgumentError("check_lemma1: s outside 1..K");
  const std::uint64_t n = binomial(A.num_blocks(), s);
  const std::uint64_t pairs = n > kSaturated / n ? kSaturated : n * n;
  require_enumerable(pairs, cap, "support pair sweep");

  const auto supports = enumerate_supports(A.num_blocks(), s);
  const auto count = static_cast<std::ptrdiff_t>(supports.size());
  std::vector<SubspaceBasis> bases(supports.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto u = static_cast<std::size_t>(k);
    bases[u] = orthonormal_basis(A.restrict(supports[u]), tol);
  }

  bool distinct = true;
#pragma omp parallel for schedule(dynamic) reduction(&& : distinct)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    for (std::ptrdiff_t j = i + 1; j < count; ++j) {
      if (spans_equal(bases[static_cast<std::size_t>(i)], bases[static_cast<std::size_t>(j)], tol)) {
        distinct = false;
      }
    }
  }
  return distinct;
}

bool check_lemma2(const BlockDict& A, const SupportSet& S, const SupportSet& S2, double tol) {
  if (S.empty() || S.size() != S2.size()) {
    throw ArgumentError("check_lemma2: supports must be nonempty and of equal size");
  }
  for (const SupportSet* T : {&S, &S2}) {
    for (int i : T->indices()) {
      if (i < 0 || i >= A.num_blocks()) throw ArgumentError("check_lemma2: support index outside 1..K");
    }
  }
  const SubspaceBasis lhs = subspace_intersection(A.restrict(S), A.restrict(S2), tol);
  const SubspaceBasis rhs = orthonormal_basis(A.restrict(S.intersect(S2)), tol);
  return spans_equal(lhs, rhs, tol);
}

}  // namespace blockacs
