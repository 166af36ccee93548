#include "blockacs/learn.hpp"

#include "blockacs/coding.hpp"
#include "blockacs/combinatorics.hpp"
#include "blockacs/errors.hpp"
#include "blockacs/generate.hpp"
#include "blockacs/subspace.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace blockacs {

std::string_view to_string(LearnerInit init) {
  return init == LearnerInit::span_intersection ? "span-intersection" : "samples";
}

LearnerInit parse_learner_init(std::string_view text) {
  if (text == "span-intersection") return LearnerInit::span_intersection;
  if (text == "samples") return LearnerInit::samples;
  throw ArgumentError("unknown learner init \"" + std::string(text) + "\"");
}

namespace {

Vector code_one(const BlockDict& B, const Vector& y, int s, double tol, bool fallback) {
  std::optional<CodingResult> best;
  try {
    best = block_omp(B, y, s, tol);
  } catch (const RankError&) {
    // Nearly collinear learned blocks; the oracle below copes with those.
  }
  if (fallback && (!best || best->residual_norm > tol)) {
    CodingResult exact = exhaustive_code(B, y, s, tol);
    if (!best || exact.residual_norm < best->residual_norm) best = std::move(exact);
  }
  return best ? best->code.values : Vector::Zero(B.structure().dim());
}

bool fallback_allowed(const BlockDict& B, int s, std::uint64_t cap) {
  return cap > 0 && binomial(B.num_blocks(), s) <= cap;
}

Matrix thin_q(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

Matrix random_block(Index P, int alpha, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(P, alpha);
  for (Index c = 0; c < g.cols(); ++c) {
    for (Index r = 0; r < g.rows(); ++r) g(r, c) = normal(rng);
  }
  return thin_q(g);
}

// Distinct positions into a pool of size n.
std::vector<int> draw_distinct(int n, int d, Rng& rng) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(d));
  std::uniform_int_distribution<int> pick(0, n - 1);
  while (static_cast<int>(out.size()) < d) {
    const int k = pick(rng);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

class SpanCollection {
 public:
  SpanCollection(int alpha, double tol) : alpha_(alpha), tol_(tol) {}

  // Adds V and, recursively, its nontrivial intersections with known spans.
  void add(const SubspaceBasis& V) {
    if (V.dim() < alpha_ || known_.size() >= kMaxKnown) return;
    for (const auto& k : known_) {
      if (spans_equal(k, V, tol_)) return;
    }
    known_.push_back(V);
    if (V.dim() == alpha_) blocks_.push_back(V);
    const std::size_t n = known_.size() - 1;
    for (std::size_t k = 0; k < n; ++k) {
      SubspaceBasis I = subspace_intersection(known_[k], known_[n], tol_);
      if (I.dim() >= alpha_ && I.dim() < std::max(known_[k].dim(), known_[n].dim())) add(I);
    }
  }

  const std::vector<SubspaceBasis>& blocks() const { return blocks_; }
  std::size_t count() const { return known_.size(); }

 private:
  static constexpr std::size_t kMaxKnown = 4096;
  int alpha_;
  double tol_;
  std::vector<SubspaceBasis> known_;
  std::vector<SubspaceBasis> blocks_;
};

Matrix init_from_samples(const Matrix& Y, const BlockStructure& st, Rng& rng, InitSummary& summary) {
  const Index P = Y.rows();
  Matrix B(P, st.dim());
  for (int i = 0; i < st.K; ++i) {
    Matrix cols(P, st.alpha);
    if (Y.cols() >= st.alpha) {
      const auto idx = draw_distinct(static_cast<int>(Y.cols()), st.alpha, rng);
      for (int j = 0; j < st.alpha; ++j) cols.col(j) = Y.col(idx[static_cast<std::size_t>(j)]);
    }
    if (Y.cols() < st.alpha || orthonormal_basis(cols).dim() < st.alpha) {
      B.middleCols(st.offset(i), st.alpha) = random_block(P, st.alpha, rng);
      ++summary.random_blocks;
    } else {
      B.middleCols(st.offset(i), st.alpha) = thin_q(cols);
    }
  }
  return B;
}

Matrix init_span_intersection(const Matrix& Y, const BlockStructure& st, const LearnerOptions& opt,
                              Rng& rng, InitSummary& summary) {
  const Index P = Y.rows();
  const int d = st.s * st.alpha;
  std::vector<int> pool;
  for (Index n = 0; n < Y.cols(); ++n) {
    if (Y.col(n).norm() > 0.0) pool.push_back(static_cast<int>(n));
  }
  Matrix Yn(P, Y.cols());
  for (Index n = 0; n < Y.cols(); ++n) {
    const double nrm = Y.col(n).norm();
    Yn.col(n) = nrm > 0.0 ? Vector(Y.col(n) / nrm) : Vector(Y.col(n));
  }

  SpanCollection spans(st.alpha, opt.init_inlier_tol);
  const double tol2 = opt.init_inlier_tol * opt.init_inlier_tol;
  Matrix pooled;
  bool stale = true;
  int t = 0;
  if (d < P) {
    for (; t < opt.init_trials; ++t) {
      if (static_cast<int>(spans.blocks().size()) >= st.K) break;
      if (static_cast<int>(pool.size()) < d + 1) break;
      if (stale) {
        pooled.resize(P, static_cast<Index>(pool.size()));
        for (std::size_t k = 0; k < pool.size(); ++k) pooled.col(static_cast<Index>(k)) = Yn.col(pool[k]);
        stale = false;
      }
      const auto pick = draw_distinct(static_cast<int>(pool.size()), d, rng);
      Matrix M(P, d);
      for (int c = 0; c < d; ++c) M.col(c) = pooled.col(pick[static_cast<std::size_t>(c)]);
      Eigen::HouseholderQR<Matrix> qr(M);
      const Matrix& R = qr.matrixQR();
      bool independent = true;
      for (int c = 0; c < d; ++c) independent = independent && std::abs(R(c, c)) > kRankTolerance;
      if (!independent) continue;
      const Matrix Q = qr.householderQ() * Matrix::Identity(P, d);

      // Unit samples: squared distance to span(Q) is 1 - |Q^T y|^2.
      const Vector dist2 = (1.0 - (Q.transpose() * pooled).colwise().squaredNorm().array()).matrix();
      std::vector<int> inliers;
      for (Index k = 0; k < dist2.size(); ++k) {
        if (dist2(k) <= tol2) inliers.push_back(static_cast<int>(k));
      }
      if (static_cast<int>(inliers.size()) < d + 1) continue;

      Matrix members(P, static_cast<Index>(inliers.size()));
      for (std::size_t k = 0; k < inliers.size(); ++k) members.col(static_cast<Index>(k)) = pooled.col(inliers[k]);
      Eigen::JacobiSVD<Matrix> svd(members, Eigen::ComputeThinU);
      spans.add(SubspaceBasis{P, svd.matrixU().leftCols(d)});
      ++summary.subspaces_found;

      std::vector<int> keep;
      std::size_t next = 0;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (next < inliers.size() && static_cast<std::size_t>(inliers[next]) == k) {
          ++next;
        } else {
          keep.push_back(pool[k]);
        }
      }
      pool.swap(keep);
      stale = true;
    }
  }
  summary.trials_used = t;
  summary.block_spans_found = static_cast<int>(spans.blocks().size());

  Matrix B(P, st.dim());
  for (int i = 0; i < st.K; ++i) {
    if (i < static_cast<int>(spans.blocks().size())) {
      B.middleCols(st.offset(i), st.alpha) = spans.blocks()[static_cast<std::size_t>(i)].basis;
    } else {
      B.middleCols(st.offset(i), st.alpha) = random_block(P, st.alpha, rng);
      ++summary.random_blocks;
    }
  }
  return B;
}

double objective_of(const Matrix& Y, const Matrix& B, const Matrix& X) {
  return (Y - B * X).squaredNorm();
}

}  // namespace

Matrix code_samples(const BlockDict& B, const Matrix& samples, int s, double tol,
                    std::uint64_t exhaustive_fallback_cap) {
  if (samples.rows() != B.ambient_dim()) throw ShapeError("samples and dictionary differ in ambient dimension");
  const bool fallback = fallback_allowed(B, s, exhaustive_fallback_cap);
  Matrix X(B.structure().dim(), samples.cols());
  const auto n = static_cast<std::ptrdiff_t>(samples.cols());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    X.col(k) = code_one(B, samples.col(k), s, tol, fallback);
  }
  return X;
}

namespace reference {

Matrix code_samples_serial(const BlockDict& B, const Matrix& samples, int s, double tol,
                           std::uint64_t exhaustive_fallback_cap) {
  if (samples.rows() != B.ambient_dim()) throw ShapeError("samples and dictionary differ in ambient dimension");
  const bool fallback = fallback_allowed(B, s, exhaustive_fallback_cap);
  Matrix X(B.structure().dim(), samples.cols());
  for (Index k = 0; k < samples.cols(); ++k) X.col(k) = code_one(B, samples.col(k), s, tol, fallback);
  return X;
}

}  // namespace reference

LearnResult learn_dictionary(const Matrix& samples, const BlockStructure& structure,
                             const LearnerOptions& options, const std::optional<Matrix>& initial) {
  structure.validate();
  if (structure.beta != 1) throw ArgumentError("learner works on beta = 1 samples; split code columns first");
  if (options.iterations < 0) throw ArgumentError("learner iterations must be >= 0");
  if (samples.rows() < 1 || samples.cols() < 1) throw ShapeError("learner needs a nonempty sample matrix");
  if (!samples.allFinite()) throw ArgumentError("samples contain non-finite entries");

  const BlockStructure& st = structure;
  const Index P = samples.rows();
  const Index N = samples.cols();
  const int a = st.alpha;
  Rng rng(options.seed);

  LearnResult out;
  out.underdetermined = N < st.dim();
  out.init.mode = options.init;

  Matrix B;
  if (initial) {
    if (initial->rows() != P || initial->cols() != st.dim()) throw ShapeError("initial dictionary has the wrong shape");
    B = *initial;
  } else if (options.init == LearnerInit::span_intersection) {
    B = init_span_intersection(samples, st, options, rng, out.init);
  } else {
    B = init_from_samples(samples, st, rng, out.init);
  }

  const double target = std::pow(options.coding_tol * samples.norm(), 2);
  const bool fallback = fallback_allowed(BlockDict(st, B), st.s, options.exhaustive_fallback_cap);
  Matrix X = Matrix::Zero(st.dim(), N);
  bool reseeded = false;

  for (int it = 0; it <= options.iterations; ++it) {
    const BlockDict current(st, B);
    Matrix fresh = code_samples(current, samples, st.s, options.coding_tol,
                                fallback ? options.exhaustive_fallback_cap : 0);
    // Keep the previous code wherever it still fits better.
    for (Index n = 0; n < N; ++n) {
      const double r_new = (samples.col(n) - B * fresh.col(n)).squaredNorm();
      const double r_old = (samples.col(n) - B * X.col(n)).squaredNorm();
      if (r_new <= r_old) X.col(n) = fresh.col(n);
    }
    const double obj = objective_of(samples, B, X);
    out.objective.push_back(obj);

    if (obj <= target) {
      out.converged = true;
      break;
    }
    if (it == options.iterations) break;
    if (it > 0 && !reseeded && obj >= out.objective[out.objective.size() - 2] * (1.0 - 1e-12)) break;

    // Dead blocks: reseed from the worst-coded samples, one sample per block.
    reseeded = false;
    std::vector<int> dead;
    for (int i = 0; i < st.K; ++i) {
      if (X.middleRows(st.offset(i), a).cwiseAbs().maxCoeff() == 0.0) dead.push_back(i);
    }
    if (!dead.empty()) {
      const Matrix R = samples - B * X;
      std::vector<int> order(static_cast<std::size_t>(N));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
        return R.col(l).squaredNorm() > R.col(r).squaredNorm();
      });
      for (std::size_t k = 0; k < dead.size(); ++k) {
        const int w = order[k % order.size()];
        Matrix seed_cols = random_block(P, a, rng);
        if (R.col(w).norm() > 0.0) seed_cols.col(0) = R.col(w).normalized();
        B.middleCols(st.offset(dead[k]), a) = thin_q(seed_cols);
        out.events.push_back(LearnerEvent{it, dead[k], "dead-block-reseed", w});
      }
      reseeded = true;
    }

    // Joint least squares over the columns of used blocks.
    std::vector<int> used;
    for (int i = 0; i < st.K; ++i) {
      if (std::find(dead.begin(), dead.end(), i) == dead.end()) used.push_back(i);
    }
    if (!used.empty()) {
      Matrix Xu(static_cast<Index>(used.size()) * a, N);
      for (std::size_t k = 0; k < used.size(); ++k) Xu.middleRows(static_cast<Index>(k) * a, a) = X.middleRows(st.offset(used[k]), a);
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Xu.transpose());
      const Matrix Bu = cod.solve(samples.transpose()).transpose();
      for (std::size_t k = 0; k < used.size(); ++k) {
        const int i = used[k];
        // B_i = Q R; move R into the codes so B X is unchanged.
        Eigen::HouseholderQR<Matrix> qr(Bu.middleCols(static_cast<Index>(k) * a, a));
        const Matrix Q = qr.householderQ() * Matrix::Identity(P, a);
        const Matrix Rf = qr.matrixQR().topRows(a).triangularView<Eigen::Upper>();
        B.middleCols(st.offset(i), a) = Q;
        X.middleRows(st.offset(i), a) = Rf * X.middleRows(st.offset(i), a);
      }
    }
  }

  out.dictionary = B;
  out.codes = X;
  out.sample_residuals.resize(static_cast<std::size_t>(N));
  for (Index n = 0; n < N; ++n) {
    out.sample_residuals[static_cast<std::size_t>(n)] = relative_residual(samples.col(n), B * X.col(n));
  }
  return out;
}

}  // namespace blockacs
