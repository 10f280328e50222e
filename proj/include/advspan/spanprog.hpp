#pragma once

// Span programs over {0,1}^n: columns of A are grouped into index sets
// I_{j,b}, stored in the order I_{1,0}, I_{1,1}, I_{2,0}, ... . Input s makes
// the columns of I_{j,s_j} available.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cstdint>
#include <numeric>
#include <vector>

#include "advspan/advsdp.hpp"
#include "advspan/boolfun.hpp"
#include "advspan/error.hpp"
#include "advspan/matkernel.hpp"

namespace advspan {

inline constexpr double kWitnessTol = 1e-7;

template <typename Scalar>
struct SpanProgram {
  int n = 0;
  std::vector<Eigen::Index> set_sizes;  // 2n entries
  Mat<Scalar> A;
  Vec<Scalar> t;

  Eigen::Index set_offset(int j, int b) const {
    return std::accumulate(set_sizes.begin(), set_sizes.begin() + 2 * (j - 1) + b, Eigen::Index{0});
  }

  /// Diagonal of Pi(s).
  Eigen::VectorXd availability(std::uint32_t s) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(A.cols());
    for (int j = 1; j <= n; ++j) {
      const int b = static_cast<int>((s >> (n - j)) & 1u);
      d.segment(set_offset(j, b), set_sizes[2 * (j - 1) + b]).setOnes();
    }
    return d;
  }

  void validate() const {
    if (n < 1 || set_sizes.size() != static_cast<std::size_t>(2 * n)) {
      throw Error(Errc::DimensionMismatch, "span program needs 2n index sets");
    }
    const Eigen::Index total = std::accumulate(set_sizes.begin(), set_sizes.end(), Eigen::Index{0});
    if (total != A.cols()) throw Error(Errc::DimensionMismatch, "index sets do not cover the columns of A");
    if (t.size() != A.rows()) throw Error(Errc::DimensionMismatch, "target and A differ in row count");
    if (t.norm() == 0.0) throw Error(Errc::BadSpec, "target vector is zero");
  }
};

template <typename Scalar>
struct Evaluation {
  bool value = false;
  Vec<Scalar> witness;  // z (true) or y (false)
  double witness_size = 0;  // ||z||^2 or ||y* A||^2
  double residual = 0;      // ||A Pi z - t|| / ||t||  or  ||y* A Pi||
  // Set when the distance from t to the available span is close to the
  // decision threshold, so the branch is numerically fragile.
  bool near_degenerate = false;
};

/// Decides s by whether t lies in the span of the available columns, and
/// returns the optimal witness of the branch taken: the minimum-norm z, or
/// the y minimizing ||y* A|| subject to y* A Pi(s) = 0 and <y|t> = 1.
template <typename Scalar>
Evaluation<Scalar> evaluate(const SpanProgram<Scalar>& p, std::uint32_t s) {
  p.validate();
  if (s >= (std::uint32_t{1} << p.n)) throw Error(Errc::IndexOutOfRange, "input outside {0,1}^n");
  const Mat<Scalar> m = p.A * p.availability(s).template cast<Scalar>().asDiagonal();
  const Eigen::Index rows = m.rows();

  // JacobiSVD does not accept a matrix without columns.
  Eigen::JacobiSVD<Mat<Scalar>> svd;
  if (m.cols() > 0) svd.compute(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sigma = m.cols() > 0 ? Eigen::VectorXd(svd.singularValues()) : Eigen::VectorXd();
  const double top = sigma.size() ? sigma(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > 1e-10 * std::max(1.0, top)) ++rank;

  const Mat<Scalar> u = m.cols() > 0 ? Mat<Scalar>(svd.matrixU()) : Mat<Scalar>::Identity(rows, rows);
  const Vec<Scalar> coeff = u.leftCols(rank).adjoint() * p.t;
  const double tnorm = p.t.norm();
  const double dist = (p.t - u.leftCols(rank) * coeff).norm() / tnorm;

  Evaluation<Scalar> out;
  out.near_degenerate = dist > 0.1 * kWitnessTol && dist < 10.0 * kWitnessTol;
  if (dist <= kWitnessTol) {
    // Admissible witnesses only need the 1e-7 residual, so directions with
    // tiny singular values are left out once the residual is met; they
    // would otherwise inflate the norm without improving the fit.
    Eigen::Index keep = rank;
    double tail = 0.0;
    for (Eigen::Index k = rank - 1; k >= 0; --k) {
      tail += std::norm(coeff(k));
      const double d = std::sqrt(dist * dist * tnorm * tnorm + tail) / tnorm;
      if (d > 0.5 * kWitnessTol) break;
      keep = k;
    }
    Vec<Scalar> scaled = coeff.head(keep);
    for (Eigen::Index k = 0; k < keep; ++k) scaled(k) /= sigma(k);
    out.value = true;
    out.witness = svd.matrixV().leftCols(keep) * scaled;
    out.witness_size = out.witness.squaredNorm();
    out.residual = (m * out.witness - p.t).norm() / tnorm;
    return out;
  }

  // y = N c over the left null space N; minimize c* G c with G = N* A A* N
  // subject to <g|c> = 1, g = N* t.
  Eigen::Index live = 0;
  while (live < rank && sigma(live) > 1e-9 * std::max(1.0, top)) ++live;
  const Mat<Scalar> null = u.rightCols(rows - live);
  const Vec<Scalar> g = null.adjoint() * p.t;
  const Mat<Scalar> an = null.adjoint() * p.A;
  const Mat<Scalar> gram = an * an.adjoint();
  const auto es = eig_hermitian(gram, 1e-8);
  const double gtop = es.size() ? std::max(0.0, es.values.maxCoeff()) : 0.0;
  Vec<Scalar> c = Vec<Scalar>::Zero(null.cols());
  Vec<Scalar> kernel_part = Vec<Scalar>::Zero(null.cols());
  double quad = 0.0;  // g* G^+ g
  for (Eigen::Index k = 0; k < es.size(); ++k) {
    const Scalar proj = es.vectors.col(k).dot(g);
    if (es.values(k) > 1e-12 * std::max(1.0, gtop)) {
      c += es.vectors.col(k) * (proj / es.values(k));
      quad += std::norm(proj) / es.values(k);
    } else {
      kernel_part += es.vectors.col(k) * proj;
    }
  }
  out.value = false;
  if (kernel_part.norm() > 1e-8 * g.norm()) {
    // Some y has y* A = 0 and <y|t> != 0: the infimum is zero.
    out.witness = null * (kernel_part / kernel_part.squaredNorm());
    out.witness_size = (out.witness.adjoint() * p.A).squaredNorm();
  } else {
    out.witness = null * (c / quad);
    out.witness_size = 1.0 / quad;
  }
  out.residual = (out.witness.adjoint() * m).norm();
  return out;
}

template <typename Scalar>
double witness_size_input(const SpanProgram<Scalar>& p, std::uint32_t s) {
  return evaluate(p, s).witness_size;
}

template <typename Scalar>
double program_witness_size(const SpanProgram<Scalar>& p) {
  double worst = 0.0;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << p.n); ++s) worst = std::max(worst, witness_size_input(p, s));
  return worst;
}

/// Canonical span program compiled from an SDP solution. `program` has one
/// row per false input (in F0 order) and the unit all-ones target; the
/// graph construction rescales the target by target_scale().
struct CanonicalSpanProgram {
  BooleanFunction f;
  SpanProgram<double> program;
  Eigen::Index m = 0;
  double W = 0;        // max_s sum_j ||v_{s,j}||^2
  double sdp_xi = 0;
  std::vector<Eigen::MatrixXd> vectors;  // vectors[s].col(j-1) = v_{s,j}
  double gram_residual = 0;        // max |<v_i|v_j> - X(i,j)| before correction
  double constraint_residual = 0;  // max_{w,x} |sum_{w_j != x_j} <v_{w,j}|v_{x,j}> - 1|

  double target_scale() const { return 1.0 / (3.0 * std::sqrt(W)); }
  Eigen::VectorXd scaled_target() const { return target_scale() * program.t; }
  double input_witness(std::uint32_t s) const { return vectors[s].squaredNorm(); }
  Eigen::Index column(int j, int b, Eigen::Index k) const { return ((j - 1) * 2 + b) * m + k; }
  Eigen::Index row(std::uint32_t w) const;
};

/// Gram vectors of X assembled into the canonical program. Each input's
/// vectors are then replaced by its optimal witness until a fixed point,
/// and the result is rotated onto its numerical span, which sets m.
/// Throws GramFailure if X is not reproduced within 1e-6 or a pair
/// constraint ends up violated by more than 1e-6.
CanonicalSpanProgram canonical_from_gram(const BooleanFunction& f, const SdpSolution& sol,
                                         double rank_tol = kRankTol);

}  // namespace advspan
