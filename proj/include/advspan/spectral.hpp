#pragma once

// Bipartite graphs of a canonical span program, the two reflections whose
// product is U_s, and the spectral checks built on them.
//
// Index orders:
//   program space   F0, mu0, I           (A_G, Delta, Pi_s, U_s)
//   input graph     F0, I', mu0, I       (A_{G(s)}; rows F0 u I', columns mu0 u I)
// |0> is the basis vector of mu0.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "advspan/error.hpp"
#include "advspan/matkernel.hpp"
#include "advspan/spanprog.hpp"

namespace advspan {

struct ProgramGraph {
  int n = 0;
  Eigen::Index f0 = 0;     // |F0|
  Eigen::Index width = 0;  // |I|
  Eigen::Index block = 0;  // m
  Eigen::MatrixXd B;       // F0 x (mu0 u I)
  Eigen::MatrixXd A;       // adjacency over F0 u mu0 u I
  Eigen::MatrixXd delta;   // projector onto null(A)

  Eigen::Index dim() const { return f0 + 1 + width; }
  Eigen::Index mu0() const { return f0; }
  Eigen::VectorXd zero_state() const { return Eigen::VectorXd::Unit(dim(), mu0()); }
  /// Diagonal of Pi_s: zero exactly on the columns (j, not s_j, k).
  Eigen::VectorXd pi_diagonal(std::uint32_t s) const;
  Eigen::MatrixXd pi(std::uint32_t s) const { return pi_diagonal(s).asDiagonal(); }
};

ProgramGraph build_program_graph(const CanonicalSpanProgram& p);

struct InputGraph {
  std::uint32_t s = 0;
  bool value = false;  // f(s)
  Eigen::Index f0 = 0;
  Eigen::Index width = 0;
  Eigen::MatrixXd B_true;   // (F0 u I') x (mu0 u I) = [t A; 0 Pibar]
  Eigen::MatrixXd B_false;  // (F0 u I') x I       = [A; Pibar]
  Eigen::MatrixXd A_Gs;     // adjacency over F0, I', mu0, I
  Eigen::MatrixXd pi_s;     // over the program space

  Eigen::Index mu0() const { return f0 + width; }
  /// Target restricted to the rows F0 u I', i.e. the mu0 column of B_true.
  Eigen::VectorXd row_target() const { return B_true.col(0); }
};

InputGraph build_input_graph(const ProgramGraph& g, const CanonicalSpanProgram& p, std::uint32_t s);

struct ZeroWitness {
  Eigen::VectorXd psi;
  double residual = 0;  // ||B_true psi|| or ||B_false* psi'||
  double overlap = 0;   // |<0|psi>|^2/||psi||^2 or |<t|psi'>|^2/||psi'||^2
  double bound = 0;     // 9/10 or 1/(9W(W+1))
  double closed_form = 0;  // 9W/(9W + W_s) or 1/(9W(1 + W_s))
};

/// f(s) = 1: psi over the columns mu0 u I, in ker B_true.
/// f(s) = 0: psi' over the rows F0 u I', in ker B_false*.
ZeroWitness zero_witness(const CanonicalSpanProgram& p, std::uint32_t s);

/// zero_witness(p, s).psi; throws WitnessViolation when the kernel residual
/// exceeds 1e-6 or the overlap falls below the bound by more than 1e-9.
Eigen::VectorXd zero_witness_vectors(const CanonicalSpanProgram& p, std::uint32_t s);

/// The true-input zero witness placed in the program space; a +1
/// eigenvector of U_s.
Eigen::VectorXd eigenvalue_one_vector(const ProgramGraph& g, const CanonicalSpanProgram& p, std::uint32_t s);

/// (2 Pi_s - 1)(2 Delta - 1).
template <typename DerivedP, typename DerivedD>
Mat<typename DerivedD::Scalar> reflection_unitary(const Eigen::MatrixBase<DerivedP>& pi,
                                                  const Eigen::MatrixBase<DerivedD>& delta) {
  using Scalar = typename DerivedD::Scalar;
  if (pi.rows() != delta.rows() || pi.cols() != delta.cols() || pi.rows() != pi.cols()) {
    throw Error(Errc::DimensionMismatch, "reflections act on different spaces");
  }
  const auto id = Mat<Scalar>::Identity(pi.rows(), pi.cols());
  return (Scalar(2) * pi.template cast<Scalar>() - id) * (Scalar(2) * delta - id);
}

inline Eigen::MatrixXd reflection_unitary(const ProgramGraph& g, std::uint32_t s) {
  return reflection_unitary(g.pi(s), g.delta);
}

template <typename Scalar>
struct JordanDecomposition {
  struct Line {
    Vec<Scalar> v;
    int delta_bit = 0;  // Delta v = b v
    int pi_bit = 0;     // Pi v = c v
  };
  struct Plane {
    Vec<Scalar> v, v_perp, w, w_perp;
    double theta = 0;  // 2 arccos |<v|w>|
  };
  std::vector<Line> one_dim;
  std::vector<Plane> two_dim;
  Eigen::Index dim = 0;

  Mat<Scalar> projector_sum() const {
    Mat<Scalar> sum = Mat<Scalar>::Zero(dim, dim);
    for (const auto& l : one_dim) sum += l.v * l.v.adjoint();
    for (const auto& p : two_dim) sum += p.v * p.v.adjoint() + p.v_perp * p.v_perp.adjoint();
    return sum;
  }

  /// U rebuilt block by block: +-1 on lines, rotation by theta on planes.
  Mat<Scalar> unitary() const {
    Mat<Scalar> u = Mat<Scalar>::Zero(dim, dim);
    for (const auto& l : one_dim) u += Scalar((2 * l.pi_bit - 1) * (2 * l.delta_bit - 1)) * l.v * l.v.adjoint();
    for (const auto& p : two_dim) {
      const Scalar c(std::cos(p.theta)), s(std::sin(p.theta));
      u += c * (p.v * p.v.adjoint() + p.v_perp * p.v_perp.adjoint()) +
           s * (p.v_perp * p.v.adjoint() - p.v * p.v_perp.adjoint());
    }
    return u;
  }

  /// Eigenpairs of U: phase 0 or pi on lines, -theta for (v + i v_perp)/sqrt2,
  /// +theta for (v - i v_perp)/sqrt2. Unsorted.
  UnitarySpectrum spectrum() const {
    const Eigen::Index count = static_cast<Eigen::Index>(one_dim.size() + 2 * two_dim.size());
    UnitarySpectrum out;
    out.phases.resize(count);
    out.vectors.resize(dim, count);
    Eigen::Index k = 0;
    for (const auto& l : one_dim) {
      out.phases(k) = l.pi_bit == l.delta_bit ? 0.0 : std::numbers::pi;
      out.vectors.col(k++) = l.v.template cast<cplx>();
    }
    const cplx i(0.0, 1.0);
    for (const auto& p : two_dim) {
      const Eigen::VectorXcd v = p.v.template cast<cplx>(), vp = p.v_perp.template cast<cplx>();
      out.phases(k) = -p.theta;
      out.vectors.col(k++) = (v + i * vp) / std::sqrt(2.0);
      out.phases(k) = p.theta;
      out.vectors.col(k++) = (v - i * vp) / std::sqrt(2.0);
    }
    return out;
  }
};

inline constexpr double kJordanTol = 1e-10;

/// Jordan decomposition of two orthogonal projectors from the spectrum of
/// Q* Pi Q on range(Delta) = range(Q), followed by Pi on the part of ker Delta
/// no plane touches. Throws DecompositionFailure if the pieces do not add
/// up to the identity within 1e-8 or Pi fails to act as 0/1 on the rest.
template <typename DerivedD, typename DerivedP>
JordanDecomposition<typename DerivedD::Scalar> jordan_decompose(const Eigen::MatrixBase<DerivedD>& delta_in,
                                                                const Eigen::MatrixBase<DerivedP>& pi_in) {
  using Scalar = typename DerivedD::Scalar;
  const Mat<Scalar> delta = delta_in;
  const Mat<Scalar> pi = pi_in.template cast<Scalar>();
  const Eigen::Index d = delta.rows();
  if (delta.cols() != d || pi.rows() != d || pi.cols() != d) {
    throw Error(Errc::DimensionMismatch, "projectors must be square and of equal size");
  }
  for (const Mat<Scalar>* p : {&delta, &pi}) {
    if (max_abs(*p * *p - *p) > 1e-9 || !is_hermitian(*p, 1e-9)) {
      throw Error(Errc::DecompositionFailure, "argument is not an orthogonal projector");
    }
  }

  JordanDecomposition<Scalar> jd;
  jd.dim = d;
  const auto ed = eig_hermitian(delta, 1e-9);
  std::vector<Eigen::Index> in_range, in_kernel;
  for (Eigen::Index k = 0; k < d; ++k) (ed.values(k) > 0.5 ? in_range : in_kernel).push_back(k);
  Mat<Scalar> q(d, static_cast<Eigen::Index>(in_range.size()));
  for (std::size_t c = 0; c < in_range.size(); ++c) q.col(c) = ed.vectors.col(in_range[c]);
  Mat<Scalar> k0(d, static_cast<Eigen::Index>(in_kernel.size()));
  for (std::size_t c = 0; c < in_kernel.size(); ++c) k0.col(c) = ed.vectors.col(in_kernel[c]);

  const auto em = eig_hermitian(Mat<Scalar>(q.adjoint() * pi * q), 1e-9);
  Mat<Scalar> used(d, 0);
  for (Eigen::Index k = 0; k < em.size(); ++k) {
    const Vec<Scalar> v = q * em.vectors.col(k);
    const double lambda = std::clamp(em.values(k), 0.0, 1.0);
    if (lambda <= kJordanTol || lambda >= 1.0 - kJordanTol) {
      jd.one_dim.push_back({v, 1, lambda > 0.5 ? 1 : 0});
      continue;
    }
    typename JordanDecomposition<Scalar>::Plane p;
    const Vec<Scalar> piv = pi * v;
    p.v = v;
    p.w = piv / std::sqrt(lambda);
    p.v_perp = (piv - delta * piv).normalized();
    p.w_perp = (v - piv) / std::sqrt(1.0 - lambda);
    p.theta = 2.0 * std::acos(std::sqrt(lambda));
    used.conservativeResize(Eigen::NoChange, used.cols() + 1);
    used.col(used.cols() - 1) = p.v_perp;
    jd.two_dim.push_back(std::move(p));
  }

  // What remains of ker Delta after removing the plane partners.
  if (k0.cols() > 0) {
    const Mat<Scalar> rest = k0 - used * (used.adjoint() * k0);
    const Eigen::Index left = k0.cols() - used.cols();
    if (left < 0) throw Error(Errc::DecompositionFailure, "more planes than kernel dimensions");
    Mat<Scalar> basis(d, 0);
    if (left > 0) {
      Eigen::JacobiSVD<Mat<Scalar>> svd(rest, Eigen::ComputeThinU);
      basis = svd.matrixU().leftCols(left);
    }
    const auto ek = eig_hermitian(Mat<Scalar>(basis.adjoint() * pi * basis), 1e-9);
    for (Eigen::Index k = 0; k < ek.size(); ++k) {
      const double c = ek.values(k);
      if (std::min(std::abs(c), std::abs(c - 1.0)) > 1e-6) {
        throw Error(Errc::DecompositionFailure, "Pi does not split ker Delta into 0/1 lines");
      }
      jd.one_dim.push_back({basis * ek.vectors.col(k), 0, c > 0.5 ? 1 : 0});
    }
  }

  const double defect = max_abs(jd.projector_sum() - Mat<Scalar>::Identity(d, d));
  if (defect > 1e-8) {
    throw Error(Errc::DecompositionFailure, "blocks miss the identity by " + std::to_string(defect));
  }
  return jd;
}

/// (parameter, lhs, rhs) with margin = rhs - lhs.
struct LemmaRow {
  double parameter = 0;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  bool holds(double slack = 1e-6) const { return margin >= -slack; }
};

/// Small-eigenvalue overlap of |0> with A_{G(s)}: sum over |rho| <= c/W of
/// |<alpha|0>|^2 against 72 c^2 (1 + 1/W). Throws WrongBranch for f(s) = 1.
std::vector<LemmaRow> effective_gap_profile(const InputGraph& ig, double W, const std::vector<double>& c_grid);

/// Small-phase overlap of |0> with U_s: sum over |theta| <= Theta of
/// |<beta|0>|^2 against (2 sqrt(6 Theta W) + Theta/2)^2. Throws WrongBranch
/// for f(s) = 1.
std::vector<LemmaRow> phase_gap_profile(const JordanDecomposition<double>& jd, const InputGraph& ig, double W,
                                        const std::vector<double>& theta_grid);

struct PsdBoundProfile {
  double delta = 0;  // ||P_null(X) t||^2
  std::vector<LemmaRow> rows;
};

/// For X' = X + |t><t|: sum over eigenpairs with 0 < theta <= gamma of
/// |<t|beta>|^2 / theta against 4 gamma / delta. Throws NoNullWitness when t
/// has no component in null(X).
PsdBoundProfile psd_spectral_bound_check(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                                         const std::vector<double>& gamma_grid);

/// Small-eigenvalue bound on a false input assembled from the PSD bound
/// with X = B_false B_false* and gamma^2. Each row carries the 8 gamma^2/delta
/// right-hand side with delta = 1/(9W(W+1)).
struct CompositionRow {
  double c = 0;
  double adjacency_lhs = 0;  // sum over 0 < |rho| <= c/W of |<alpha|0>|^2
  double psd_lhs = 0;        // PSD sum at gamma^2, the same quantity
  double psd_rhs = 0;        // 4 gamma^2 / delta_best
  double rhs = 0;            // 8 gamma^2 / delta
  double rhs_lemma = 0;      // 72 c^2 (1 + 1/W)
  double margin = 0;         // rhs - adjacency_lhs
};
std::vector<CompositionRow> small_eigenvalue_profile(const InputGraph& ig, double W,
                                                     const std::vector<double>& c_grid);

/// Largest |lambda_k + lambda_{N-1-k}| over the sorted spectrum.
double spectrum_symmetry_defect(const Eigen::MatrixXd& adjacency);

/// One "row col weight" line per nonzero entry.
void write_edge_list(std::ostream& out, const Eigen::MatrixXd& biadjacency);

}  // namespace advspan
