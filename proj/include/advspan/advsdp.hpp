#pragma once

// Witness-size SDP for the general adversary bound:
//
//   min xi  s.t.  X >= 0,
//                 sum_{j: w_j != x_j} X[(w,j),(x,j)] = 1   for (w,x) in F0 x F1,
//                 sum_j X[(s,j),(s,j)] <= xi               for every s,
//
// with X indexed by (s,j) -> s*n + (j-1). Its dual
//
//   max sum alpha  s.t.  diag(beta) (x) I - sum alpha_wx E_wx >= 0,
//                        sum beta <= 1, beta >= 0
//
// yields the adversary matrix Gamma[w,x] = alpha_wx / (2 sqrt(beta_w beta_x)).

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "advspan/boolfun.hpp"
#include "advspan/error.hpp"
#include "advspan/matkernel.hpp"

namespace advspan {

struct WitnessSdp {
  BooleanFunction f;
  int n = 0;
  Eigen::Index dim = 0;  // n * 2^n
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // (w, x), w in F0, x in F1
  // For each pair, the index pairs ((w,j),(x,j)) with w_j != x_j.
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> entries;

  Eigen::Index index(std::uint32_t s, int j) const { return static_cast<Eigen::Index>(s) * n + (j - 1); }
  std::size_t equality_count() const { return pairs.size(); }
  std::size_t inequality_count() const { return std::size_t{1} << n; }
};

/// Throws ConstantFunction when F0 or F1 is empty.
WitnessSdp build_witness_sdp(const BooleanFunction& f);

struct SdpOptions {
  double tol = 1e-7;
  int max_iterations = 50000;
  double rho = 1.0;
  double relaxation = 1.6;
  int check_every = 10;
};

struct SdpResiduals {
  double equality = 0;      // max |sum X[(w,j),(x,j)] - 1|
  double row_sum = 0;       // max (sum_j X[(s,j),(s,j)] - xi)_+
  double psd = 0;           // max(0, -lambda_min(X))
  double dual_cone = 0;     // max(0, -lambda_min(S_X), -min beta, sum beta - 1)
  double gap = 0;           // |xi - sum alpha|
  double consensus = 0;     // splitting residual at exit
  int iterations = 0;
};

struct SdpSolution {
  Eigen::MatrixXd X;
  double xi = 0;
  Eigen::VectorXd alpha;  // one per equality constraint, in WitnessSdp::pairs order
  Eigen::VectorXd beta;   // one per input s
  double dual_objective = 0;
  SdpResiduals residuals;
};

/// Projection-splitting solve. Throws NoConvergence (with residuals in the
/// message) when the iteration cap is reached first.
SdpSolution solve_sdp(const WitnessSdp& p, const SdpOptions& options);
SdpSolution solve_sdp(const WitnessSdp& p, double tol = 1e-7);

/// Residuals of an arbitrary (X, xi, alpha, beta) against the program.
SdpResiduals evaluate_residuals(const WitnessSdp& p, const SdpSolution& sol);

struct AdversaryCertificate {
  Eigen::MatrixXd gamma;
  double value = 0;   // ||Gamma|| / max_i ||Gamma o D_i||
  double norm = 0;    // ||Gamma||
  Eigen::VectorXd coordinate_norms;  // ||Gamma o D_i||, i = 1..n
  std::vector<std::uint32_t> dropped;  // inputs whose beta was treated as zero
  // <sqrt(beta)| Gamma |sqrt(beta)> / ||Gamma||; 1 when sqrt(beta) is a top
  // eigenvector. Reported, not asserted.
  double beta_alignment = 0;
};

inline constexpr double kBetaDropTol = 1e-10;

/// Inputs with beta_s <= beta_tol * max(beta) are dropped (their rows and
/// columns of Gamma are zero). Throws DegenerateDual when that leaves no
/// (w, x) pair.
AdversaryCertificate extract_certificate(const SdpSolution& sol, const WitnessSdp& p,
                                         double beta_tol = kBetaDropTol);

/// ||Gamma|| / max_i ||Gamma o D_i||. Throws ZeroMatrix for Gamma = 0 and
/// PatternViolation when Gamma is nonzero on a pair with f(x) = f(y).
template <typename Derived>
double adversary_ratio(const Eigen::MatrixBase<Derived>& gamma, const BooleanFunction& f) {
  const Eigen::Index len = f.size();
  if (gamma.rows() != len || gamma.cols() != len) {
    throw Error(Errc::DimensionMismatch, "adversary matrix must be 2^n x 2^n");
  }
  const double scale = max_abs(gamma);
  if (scale == 0.0) throw Error(Errc::ZeroMatrix, "adversary matrix is zero");
  for (Eigen::Index x = 0; x < len; ++x)
    for (Eigen::Index y = 0; y < len; ++y)
      if (f(x) == f(y) && std::abs(gamma(x, y)) > 1e-12 * scale) {
        throw Error(Errc::PatternViolation, "nonzero entry at (" + std::to_string(x) + "," +
                                                std::to_string(y) + ")");
      }
  double worst = 0.0;
  for (int i = 1; i <= f.arity(); ++i)
    worst = std::max(worst, spectral_norm(hadamard(gamma, difference_matrix(f, i))));
  return spectral_norm(gamma) / worst;
}

}  // namespace advspan
