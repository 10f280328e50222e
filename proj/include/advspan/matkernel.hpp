#pragma once

// Dense linear-algebra kernel: Hermitian eigensystems by cyclic Jacobi
// rotations, the spectral/trace/Frobenius norms, Gram factorization and
// null-space projectors. Everything is templated on the scalar type and works
// for real symmetric as well as complex Hermitian input.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "advspan/error.hpp"

namespace advspan {

using cplx = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kZeroTol = 1e-8;
inline constexpr double kRankTol = 1e-8;

/// Eigenvalues ascending; eigenvectors are the orthonormal columns of `vectors`.
template <typename Scalar>
struct EigenSystem {
  Eigen::VectorXd values;
  Mat<Scalar> vectors;

  Eigen::Index size() const { return values.size(); }
};

/// Unit-modulus eigenvalues e^{i phase} with phase in (-pi, pi], ascending.
struct UnitarySpectrum {
  Eigen::VectorXd phases;
  Eigen::MatrixXcd vectors;
};

namespace detail {

template <typename Scalar>
double real_part(const Scalar& x) {
  return std::real(x);
}

template <typename Scalar>
bool lex_less(const Vec<Scalar>& a, const Vec<Scalar>& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double ar = std::real(a(i)), br = std::real(b(i));
    if (std::abs(ar - br) > tol) return ar < br;
    const double ai = std::imag(a(i)), bi = std::imag(b(i));
    if (std::abs(ai - bi) > tol) return ai < bi;
  }
  return false;
}

// Scales each column so its first entry of significant magnitude is real
// and positive.
template <typename Scalar>
void normalize_phases(Mat<Scalar>& v) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double peak = v.col(k).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, k));
      if (mag > 1e-6 * peak) {
        v.col(k) *= Eigen::numext::conj(v(i, k)) / Scalar(mag);
        break;
      }
    }
  }
}

// Sorts eigenpairs ascending; near-equal eigenvalues are ordered by their
// eigenvectors so that the result is reproducible.
template <typename Scalar>
void sort_eigenpairs(Eigen::VectorXd& values, Mat<Scalar>& vectors, double tie_tol) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && values(order[end]) - values(order[begin]) <= tie_tol) ++end;
    if (end - begin > 1) {
      std::stable_sort(order.begin() + begin, order.begin() + end,
                       [&](Eigen::Index a, Eigen::Index b) {
                         return lex_less<Scalar>(vectors.col(a), vectors.col(b), 1e-12);
                       });
    }
    begin = end;
  }
  Eigen::VectorXd sorted_values(n);
  Mat<Scalar> sorted_vectors(vectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sorted_values(k) = values(order[k]);
    sorted_vectors.col(k) = vectors.col(order[k]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

}  // namespace detail

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |M(i,j) - conj(M(j,i))|.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && hermitian_defect(m) <= tol * std::max(1.0, max_abs(m));
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Throws Errc::NonHermitian when the input is not Hermitian within
/// `sym_tol` (scaled by the largest entry). The strictly Hermitian part is
/// decomposed, so rounding-level asymmetry does not leak into the result.
template <typename Derived>
EigenSystem<typename Derived::Scalar> eig_hermitian(const Eigen::MatrixBase<Derived>& m,
                                                    double sym_tol = kHermitianTol) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) {
    throw Error(Errc::DimensionMismatch, "eig_hermitian needs a square matrix");
  }
  if (!is_hermitian(m, sym_tol)) {
    throw Error(Errc::NonHermitian, "asymmetry " + std::to_string(hermitian_defect(m)));
  }
  const Eigen::Index n = m.rows();
  Mat<Scalar> a = (m + m.adjoint()) / 2.0;
  Mat<Scalar> v = Mat<Scalar>::Identity(n, n);
  const double scale = a.norm();

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (Eigen::Index q = 1; q < n; ++q) {
      for (Eigen::Index p = 0; p < q; ++p) {
        if (std::abs(a(p, q)) <= 1e-18 * scale) continue;
        Eigen::JacobiRotation<Scalar> rot;
        if (!rot.makeJacobi(a, p, q)) continue;
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
      }
    }
  }

  EigenSystem<Scalar> out;
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.values(i) = detail::real_part(a(i, i));
  out.vectors = std::move(v);
  detail::normalize_phases(out.vectors);
  detail::sort_eigenpairs(out.values, out.vectors, 1e-10 * std::max(1.0, scale));
  return out;
}

/// Singular values in descending order, from the Hermitian embedding
/// [[0, M], [M*, 0]] whose spectrum is {+-sigma_i} plus zeros.
template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index r = m.rows(), c = m.cols();
  const Eigen::Index k = std::min(r, c);
  if (k == 0) return Eigen::VectorXd();
  Mat<Scalar> h = Mat<Scalar>::Zero(r + c, r + c);
  h.topRightCorner(r, c) = m;
  h.bottomLeftCorner(c, r) = m.adjoint();
  const auto es = eig_hermitian(h);
  Eigen::VectorXd s(k);
  for (Eigen::Index i = 0; i < k; ++i) s(i) = std::max(0.0, es.values(r + c - 1 - i));
  return s;
}

/// Largest singular value.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) return eig_hermitian(m).values.cwiseAbs().maxCoeff();
  return singular_values(m)(0);
}

/// Sum of singular values, Tr sqrt(M* M).
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) return eig_hermitian(m).values.cwiseAbs().sum();
  return singular_values(m).sum();
}

template <typename Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

template <typename DerivedA, typename DerivedB>
Mat<typename DerivedA::Scalar> hadamard(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, "hadamard operands differ in shape");
  }
  return a.cwiseProduct(b.template cast<typename DerivedA::Scalar>());
}

/// Vectors v_k (the columns of the result, of dimension equal to the
/// numerical rank) with <v_i|v_j> = X(i,j). Eigenvalues at or below
/// `rank_tol` are dropped; an eigenvalue below -rank_tol raises NotPSD.
template <typename Derived>
Mat<typename Derived::Scalar> gram_factor(const Eigen::MatrixBase<Derived>& x,
                                          double rank_tol = kRankTol) {
  using Scalar = typename Derived::Scalar;
  const auto es = eig_hermitian(x);
  if (es.size() > 0 && es.values(0) < -rank_tol) {
    throw Error(Errc::NotPSD, "minimum eigenvalue " + std::to_string(es.values(0)));
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = es.size() - 1; k >= 0; --k)
    if (es.values(k) > rank_tol) kept.push_back(k);
  Mat<Scalar> g(static_cast<Eigen::Index>(kept.size()), x.cols());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const Eigen::Index k = kept[r];
    g.row(static_cast<Eigen::Index>(r)) = std::sqrt(es.values(k)) * es.vectors.col(k).adjoint();
  }
  return g;
}

/// Orthonormal basis (columns) of the eigenvectors with |lambda| <= zero_tol * ||M||.
template <typename Derived>
Mat<typename Derived::Scalar> nullspace_basis(const Eigen::MatrixBase<Derived>& m,
                                              double zero_tol = kZeroTol) {
  using Scalar = typename Derived::Scalar;
  const auto es = eig_hermitian(m);
  const double norm = es.size() > 0 ? es.values.cwiseAbs().maxCoeff() : 0.0;
  const double cut = zero_tol * norm;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < es.size(); ++k)
    if (std::abs(es.values(k)) <= cut) kept.push_back(k);
  Mat<Scalar> basis(m.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c)
    basis.col(static_cast<Eigen::Index>(c)) = es.vectors.col(kept[c]);
  return basis;
}

/// Orthogonal projector onto the (numerical) kernel of a Hermitian matrix.
template <typename Derived>
Mat<typename Derived::Scalar> nullspace_projector(const Eigen::MatrixBase<Derived>& m,
                                                  double zero_tol = kZeroTol) {
  const auto basis = nullspace_basis(m, zero_tol);
  return basis * basis.adjoint();
}

/// Eigen-decomposition of a unitary matrix through its complex Schur form,
/// which is diagonal for normal input.
inline UnitarySpectrum eig_unitary(const Eigen::MatrixXcd& u, double tol = 1e-9) {
  const Eigen::Index n = u.rows();
  if (u.cols() != n) throw Error(Errc::DimensionMismatch, "eig_unitary needs a square matrix");
  const double defect = max_abs(u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n));
  if (defect > tol) throw Error(Errc::NotUnitary, "||U*U - I|| = " + std::to_string(defect));

  UnitarySpectrum out;
  out.phases.resize(n);
  if (n == 0) return out;
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  const Eigen::MatrixXcd& t = schur.matrixT();
  const double off = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff();
  if (off > 1e3 * tol) throw Error(Errc::NotUnitary, "Schur form is not diagonal");
  for (Eigen::Index k = 0; k < n; ++k) {
    double phase = std::arg(t(k, k));
    if (phase <= -std::numbers::pi) phase = std::numbers::pi;
    out.phases(k) = phase;
  }
  out.vectors = schur.matrixU();
  detail::normalize_phases(out.vectors);
  detail::sort_eigenpairs(out.phases, out.vectors, 1e-12);
  return out;
}

}  // namespace advspan
