#include "advspan/matkernel.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace advspan;
using advspan::testing::random_complex;
using advspan::testing::random_hermitian;
using advspan::testing::random_real;

TEST(EigHermitian, Identity) {
  const auto es = eig_hermitian(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_NEAR(es.values(0), 1.0, 1e-15);
  EXPECT_NEAR(es.values(1), 1.0, 1e-15);
}

TEST(EigHermitian, PauliX) {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  const auto es = eig_hermitian(x);
  EXPECT_NEAR(es.values(0), -1.0, 1e-14);
  EXPECT_NEAR(es.values(1), 1.0, 1e-14);
}

TEST(EigHermitian, TwoByTwoFromCharacteristicPolynomial) {
  // det([[1-l, 2], [2, 1-l]]) = (1-l)^2 - 4 = 0  =>  l = -1, 3
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  const auto es = eig_hermitian(m);
  EXPECT_NEAR(es.values(0), -1.0, 1e-14);
  EXPECT_NEAR(es.values(1), 3.0, 1e-14);
  EXPECT_LE((m * es.vectors - es.vectors * es.values.asDiagonal()).norm(), 1e-12);
}

TEST(EigHermitian, RejectsNonHermitian) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 0, 0;
  try {
    eig_hermitian(m);
    FAIL() << "expected NonHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonHermitian);
  }
}

TEST(EigHermitian, RandomComplexMatchesReferenceAndReconstructs) {
  std::mt19937 rng(7);
  for (int n : {1, 2, 3, 5, 8, 13, 24, 40}) {
    const Eigen::MatrixXcd m = random_hermitian(n, rng);
    const auto es = eig_hermitian(m);
    const Eigen::VectorXd ref = advspan::testing::reference_eigenvalues(m);
    EXPECT_LE((es.values - ref).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n;

    const Eigen::MatrixXcd rebuilt = es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
    EXPECT_LE(max_abs(rebuilt - m), 1e-8);
    const Eigen::MatrixXcd gram = es.vectors.adjoint() * es.vectors;
    EXPECT_LE(max_abs(gram - Eigen::MatrixXcd::Identity(n, n)), 1e-10);
    const double scale = std::max(1.0, spectral_norm(m));
    for (Eigen::Index k = 0; k < n; ++k) {
      EXPECT_LE((m * es.vectors.col(k) - es.values(k) * es.vectors.col(k)).norm(), 1e-9 * scale);
    }
    for (Eigen::Index k = 1; k < n; ++k) EXPECT_LE(es.values(k - 1), es.values(k));
  }
}

TEST(EigHermitian, DeterministicOnDegenerateSpectrum) {
  std::mt19937 rng(11);
  const Eigen::MatrixXcd q = advspan::testing::random_unitary(6, rng);
  Eigen::VectorXd d(6);
  d << 1, 1, 1, -2, -2, 0.5;
  const Eigen::MatrixXcd m = q * d.asDiagonal() * q.adjoint();
  const Eigen::MatrixXcd hm = (m + m.adjoint()) / 2.0;
  const auto a = eig_hermitian(hm);
  const auto b = eig_hermitian(hm);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_NEAR(a.values(0), -2.0, 1e-12);
  EXPECT_NEAR(a.values(5), 1.0, 1e-12);
}

TEST(Norms, SpectralNormExamples) {
  EXPECT_NEAR(spectral_norm(Eigen::MatrixXd::Identity(3, 3)), 1.0, 1e-15);
  EXPECT_EQ(spectral_norm(Eigen::MatrixXd::Zero(3, 3)), 0.0);
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_NEAR(spectral_norm(m), 3.0, 1e-13);
}

TEST(Norms, TraceNormExamples) {
  EXPECT_NEAR(trace_norm(Eigen::MatrixXd::Identity(2, 2)), 2.0, 1e-14);
  Eigen::VectorXcd u(3), v(4);
  u << cplx(1, 1), cplx(0, 2), cplx(-1, 0);
  v << cplx(1, 0), cplx(2, -1), cplx(0, 0), cplx(0, 3);
  u.normalize();
  v.normalize();
  EXPECT_NEAR(trace_norm(u * v.adjoint()), 1.0, 1e-12);
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_NEAR(trace_norm(m), 4.0, 1e-13);
}

TEST(Norms, RectangularMatchesReferenceSvd) {
  std::mt19937 rng(3);
  for (auto [r, c] : {std::pair{3, 5}, std::pair{6, 2}, std::pair{7, 7}}) {
    const Eigen::MatrixXcd m = random_complex(r, c, rng);
    EXPECT_NEAR(spectral_norm(m), advspan::testing::reference_spectral_norm(m), 1e-10);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    EXPECT_NEAR(trace_norm(m), svd.singularValues().sum(), 1e-10);
  }
}

TEST(Norms, SchattenOrdering) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int r = 1 + trial % 7, c = 1 + (trial * 3) % 5;
    const Eigen::MatrixXcd m = random_complex(r, c, rng);
    const double s = spectral_norm(m), f = frobenius_norm(m), t = trace_norm(m);
    EXPECT_LE(s, f + 1e-12);
    EXPECT_LE(f, t + 1e-12);
  }
}

TEST(Norms, TraceNormIsDualOfSpectralNorm) {
  // max_B |<M,B>| / ||B|| is attained at B = U V* from the SVD; random B
  // never exceed it.
  std::mt19937 rng(9);
  const Eigen::MatrixXcd m = random_complex(4, 4, rng);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXcd best = svd.matrixU() * svd.matrixV().adjoint();
  const double attained = std::abs((m.adjoint() * best).trace()) / spectral_norm(best);
  EXPECT_NEAR(attained, trace_norm(m), 1e-6);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXcd b = random_complex(4, 4, rng);
    EXPECT_LE(std::abs((m.adjoint() * b).trace()) / spectral_norm(b), trace_norm(m) + 1e-9);
  }
}

TEST(Hadamard, Examples) {
  Eigen::MatrixXd a(2, 2), p(2, 2), expect(2, 2);
  a << 1, 2, 3, 4;
  p << 0, 1, 1, 0;
  expect << 0, 2, 3, 0;
  EXPECT_EQ(hadamard(a, p), expect);
  EXPECT_EQ(hadamard(a, Eigen::MatrixXd::Ones(2, 2)), a);
  EXPECT_EQ(hadamard(a, Eigen::MatrixXd::Zero(2, 2)), Eigen::MatrixXd::Zero(2, 2));
  try {
    hadamard(a, Eigen::MatrixXd::Ones(3, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(GramFactor, IdentityAndRankOne) {
  const Eigen::MatrixXd g = gram_factor(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(g.rows(), 2);
  EXPECT_LE(max_abs(g.transpose() * g - Eigen::MatrixXd::Identity(2, 2)), 1e-14);

  const Eigen::MatrixXd ones = gram_factor(Eigen::MatrixXd::Ones(2, 2));
  ASSERT_EQ(ones.rows(), 1);
  EXPECT_NEAR((ones.col(0) - ones.col(1)).norm(), 0.0, 1e-14);
  EXPECT_NEAR(ones.col(0).squaredNorm(), 1.0, 1e-14);
}

TEST(GramFactor, ReproducesRandomPsd) {
  std::mt19937 rng(21);
  for (int n : {1, 4, 9, 16, 32}) {
    for (int rank : {1, n / 2 + 1, n}) {
      const Eigen::MatrixXcd f = random_complex(rank, n, rng);
      const Eigen::MatrixXcd x = f.adjoint() * f;
      const Eigen::MatrixXcd g = gram_factor(x);
      EXPECT_EQ(g.rows(), rank);
      EXPECT_LE(max_abs(g.adjoint() * g - x), 1e-8) << "n=" << n << " rank=" << rank;
    }
  }
}

TEST(GramFactor, RejectsIndefinite) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, -1;
  try {
    gram_factor(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotPSD);
  }
}

TEST(NullspaceProjector, Examples) {
  EXPECT_LE(max_abs(nullspace_projector(Eigen::MatrixXd::Zero(3, 3)) - Eigen::MatrixXd::Identity(3, 3)),
            1e-15);
  EXPECT_LE(max_abs(nullspace_projector(Eigen::MatrixXd::Identity(2, 2))), 1e-15);
  Eigen::MatrixXd m(2, 2), expect(2, 2);
  m << 0, 0, 0, 1;
  expect << 1, 0, 0, 0;
  EXPECT_LE(max_abs(nullspace_projector(m) - expect), 1e-15);
}

TEST(NullspaceProjector, IdempotentHermitianAndExact) {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial;
    const int rank = 1 + trial % (n - 1);
    const Eigen::MatrixXcd f = random_complex(rank, n, rng);
    const Eigen::MatrixXcd m = f.adjoint() * f;
    const Eigen::MatrixXcd p = nullspace_projector(m);
    EXPECT_LE(max_abs(p * p - p), 1e-9);
    EXPECT_LE(hermitian_defect(p), 1e-9);
    EXPECT_NEAR(p.trace().real(), n - rank, 1e-9);
    EXPECT_LE(max_abs(m * p), 1e-9);
  }
}

TEST(EigUnitary, PhasesMatchConstruction) {
  std::mt19937 rng(4);
  const Eigen::MatrixXcd q = advspan::testing::random_unitary(5, rng);
  Eigen::VectorXd phases(5);
  phases << -2.5, -0.3, 0.0, 0.3, std::numbers::pi;
  Eigen::VectorXcd diag(5);
  for (int k = 0; k < 5; ++k) diag(k) = std::polar(1.0, phases(k));
  const Eigen::MatrixXcd u = q * diag.asDiagonal() * q.adjoint();
  const auto spec = eig_unitary(u);
  EXPECT_LE((spec.phases - phases).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(max_abs(spec.vectors.adjoint() * spec.vectors - Eigen::MatrixXcd::Identity(5, 5)), 1e-10);
}

TEST(EigUnitary, RejectsNonUnitary) {
  try {
    eig_unitary(2.0 * Eigen::MatrixXcd::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotUnitary);
  }
}
