#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>

#include "advspan/error.hpp"
#include "advspan/matkernel.hpp"

// Expects `stmt` to throw advspan::Error carrying `errc`.
#define EXPECT_ERRC(stmt, errc)                                       \
  do {                                                                \
    try {                                                             \
      stmt;                                                           \
      ADD_FAILURE() << #stmt " did not throw";                        \
    } catch (const ::advspan::Error& e_) {                            \
      EXPECT_EQ(e_.code(), errc) << e_.what();                        \
    }                                                                 \
  } while (0)

namespace advspan::testing {

inline Eigen::MatrixXd random_real(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(dist(rng), dist(rng));
  return m;
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::mt19937& rng) {
  const Eigen::MatrixXcd g = random_complex(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

inline Eigen::MatrixXcd random_unitary(Eigen::Index n, std::mt19937& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_complex(n, n, rng));
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

// Independent reference spectrum (Householder tridiagonalization + QR).
template <typename Derived>
Eigen::VectorXd reference_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using MatrixType = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<MatrixType> solver(m.eval(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

template <typename Derived>
double reference_spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using MatrixType = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<MatrixType> svd(m.eval());
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace advspan::testing
