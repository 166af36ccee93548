#pragma once

#include "blockacs/block.hpp"

#include <cstdint>

namespace blockacs {

struct SubspaceBasis {
  Index ambient_dim = 0;
  Matrix basis;  // ambient_dim x dim, orthonormal columns

  Index dim() const { return basis.cols(); }
};

// Left singular vectors for singular values > tol * sigma_max. An all-zero
// (or zero-column) M gives a dimension-0 basis.
SubspaceBasis orthonormal_basis(const Matrix& M, double tol = kRankTolerance);

// Two directions count as coincident when 1 - cos(theta) <= tol, i.e.
// sin(theta) <= sqrt(tol * (2 - tol)).
double sine_tolerance(double tol);

// Singular values of (I - Q1 Q1^T) Q2: the sines of the principal angles
// between span(Q2) and span(Q1), one per column of Q2.
Vector principal_sines(const SubspaceBasis& q1, const SubspaceBasis& q2);

bool spans_equal(const SubspaceBasis& q1, const SubspaceBasis& q2, double tol = kRankTolerance);
bool spans_equal(const Matrix& M1, const Matrix& M2, double tol = kRankTolerance);

// Principal vectors of span(M2) whose angle to span(M1) is within tolerance.
SubspaceBasis subspace_intersection(const SubspaceBasis& q1, const SubspaceBasis& q2,
                                    double tol = kRankTolerance);
SubspaceBasis subspace_intersection(const Matrix& M1, const Matrix& M2,
                                    double tol = kRankTolerance);

// True iff no two distinct size-s supports have equal spans.
bool check_lemma1(const BlockDict& A, int s, double tol = kRankTolerance,
                  std::uint64_t cap = kEnumerationCap);

// True iff span(A_S) ∩ span(A_S2) equals span(A_{S ∩ S2}).
bool check_lemma2(const BlockDict& A, const SupportSet& S, const SupportSet& S2,
                  double tol = kRankTolerance);

}  // namespace blockacs
