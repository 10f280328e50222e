#include "advspan/advsdp.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "test_util.hpp"

using namespace advspan;

namespace {

// Best ratio over the grid Gamma = a * (distance-1 pairs) + b * (distance-3 pairs).
double parity_symmetric_oracle(int n) {
  const BooleanFunction f = load_function("PARITY:" + std::to_string(n));
  double best = 0;
  for (int k = 0; k <= 40; ++k) {
    const double b = -1.0 + k / 20.0;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(f.size(), f.size());
    for (std::uint32_t x = 0; x < f.size(); ++x)
      for (std::uint32_t y = 0; y < f.size(); ++y) {
        const int d = std::popcount(x ^ y);
        if (d == 1) g(x, y) = 1.0;
        if (d == 3) g(x, y) = b;
      }
    best = std::max(best, adversary_ratio(g, f));
    if (n < 3) break;  // no distance-3 pairs
  }
  return best;
}

// OR:2 with Gamma[00,01] = Gamma[00,10] = a and Gamma[00,11] = b.
double or2_grid_oracle() {
  const BooleanFunction f = load_function("OR:2");
  double best = 0;
  for (int i = 0; i <= 50; ++i)
    for (int k = -50; k <= 50; ++k) {
      const double a = i / 50.0, b = k / 50.0;
      if (a == 0 && b == 0) continue;
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
      g(0, 1) = g(1, 0) = a;
      g(0, 2) = g(2, 0) = a;
      g(0, 3) = g(3, 0) = b;
      best = std::max(best, adversary_ratio(g, f));
    }
  return best;
}

// Identity on one bit: X = v v^T with v = (a, 1/a) meets the single pair
// constraint, and the objective is max(a^2, 1/a^2).
double identity_rank_one_oracle() {
  double best = 1e300;
  for (int k = 1; k <= 400; ++k) {
    const double a = k / 200.0;
    best = std::min(best, std::max(a * a, 1.0 / (a * a)));
  }
  return best;
}

SdpSolution solve(const char* spec) { return solve_sdp(build_witness_sdp(load_function(spec))); }

}  // namespace

TEST(BuildWitnessSdp, Counts) {
  const WitnessSdp parity = build_witness_sdp(load_function("PARITY:2"));
  EXPECT_EQ(parity.dim, 8);
  EXPECT_EQ(parity.equality_count(), 4u);
  EXPECT_EQ(parity.inequality_count(), 4u);
  const WitnessSdp orf = build_witness_sdp(load_function("OR:2"));
  EXPECT_EQ(orf.dim, 8);
  EXPECT_EQ(orf.equality_count(), 3u);
  const WitnessSdp id = build_witness_sdp(load_function("AND:1"));
  EXPECT_EQ(id.dim, 2);
  EXPECT_EQ(id.equality_count(), 1u);
}

TEST(BuildWitnessSdp, ConstraintsTouchDifferingCoordinates) {
  const WitnessSdp p = build_witness_sdp(load_function("MAJ:3"));
  for (std::size_t k = 0; k < p.pairs.size(); ++k) {
    const auto [w, x] = p.pairs[k];
    EXPECT_FALSE(p.f(w));
    EXPECT_TRUE(p.f(x));
    EXPECT_EQ(static_cast<int>(p.entries[k].size()), std::popcount(w ^ x));
    for (const auto& [a, b] : p.entries[k]) {
      const int j = static_cast<int>(a % p.n) + 1;
      EXPECT_EQ(a, p.index(w, j));
      EXPECT_EQ(b, p.index(x, j));
      EXPECT_NE(p.f.bit(w, j), p.f.bit(x, j));
    }
  }
}

TEST(BuildWitnessSdp, RejectsConstant) {
  EXPECT_ERRC(build_witness_sdp(load_function("0000")), Errc::ConstantFunction);
  EXPECT_ERRC(build_witness_sdp(load_function("11")), Errc::ConstantFunction);
}

TEST(SolveSdp, Parity2) { EXPECT_NEAR(solve("PARITY:2").xi, 2.0, 1e-4); }

TEST(SolveSdp, IdentityMatchesRankOneOracle) {
  EXPECT_NEAR(identity_rank_one_oracle(), 1.0, 1e-12);
  EXPECT_NEAR(solve("01").xi, identity_rank_one_oracle(), 1e-4);
}

TEST(SolveSdp, Or2MatchesGridOracle) {
  const double oracle = or2_grid_oracle();
  EXPECT_NEAR(oracle, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(solve("OR:2").xi, oracle, 1e-3);
}

TEST(SolveSdp, ParityMatchesSymmetricOracle) {
  for (int n = 1; n <= 3; ++n) {
    const double oracle = parity_symmetric_oracle(n);
    EXPECT_NEAR(oracle, n, 1e-9);
    const std::string spec = "PARITY:" + std::to_string(n);
    EXPECT_NEAR(solve(spec.c_str()).xi, oracle, 1e-2) << spec;
  }
}

TEST(SolveSdp, ComplexPhasesDoNotBeatRealOptimum) {
  // Unit-modulus Gamma on the four parity pairs with three free phases
  // (one is a global gauge).
  const BooleanFunction f = load_function("PARITY:2");
  const double xi = solve("PARITY:2").xi;
  const std::uint32_t zeros[2] = {0, 3}, ones[2] = {1, 2};
  double best = 0;
  const int steps = 12;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b)
      for (int c = 0; c < steps; ++c) {
        const double phase[4] = {0.0, 2 * std::numbers::pi * a / steps, 2 * std::numbers::pi * b / steps,
                                 2 * std::numbers::pi * c / steps};
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4, 4);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const cplx z = std::polar(1.0, phase[2 * i + j]);
            g(zeros[i], ones[j]) = z;
            g(ones[j], zeros[i]) = std::conj(z);
          }
        best = std::max(best, adversary_ratio(g, f));
      }
  EXPECT_NEAR(best, 2.0, 1e-9);
  EXPECT_LE(best, xi + 1e-4);
}

TEST(SolveSdp, FeasibilityResiduals) {
  for (const char* spec : {"PARITY:2", "OR:2", "MAJ:3", "00101101"}) {
    const WitnessSdp p = build_witness_sdp(load_function(spec));
    const SdpSolution sol = solve_sdp(p);
    // Recomputed here from X directly.
    EXPECT_GE(advspan::testing::reference_eigenvalues(sol.X).minCoeff(), -1e-7) << spec;
    for (std::size_t k = 0; k < p.pairs.size(); ++k) {
      double sum = 0;
      for (const auto& [a, b] : p.entries[k]) sum += sol.X(a, b);
      EXPECT_NEAR(sum, 1.0, 1e-6) << spec;
    }
    for (std::uint32_t s = 0; s < p.f.size(); ++s) {
      double row = 0;
      for (int j = 1; j <= p.n; ++j) row += sol.X(p.index(s, j), p.index(s, j));
      EXPECT_LE(row, sol.xi + 1e-6) << spec;
    }
    EXPECT_LE(std::abs(sol.xi - sol.dual_objective), 1e-6 * std::max(1.0, sol.xi)) << spec;
    const SdpResiduals r = evaluate_residuals(p, sol);
    EXPECT_NEAR(r.equality, sol.residuals.equality, 1e-12);
  }
}

TEST(SolveSdp, Deterministic) {
  const SdpSolution a = solve("MAJ:3"), b = solve("MAJ:3");
  EXPECT_EQ(a.xi, b.xi);
  EXPECT_EQ(a.X, b.X);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.beta, b.beta);
}

TEST(SolveSdp, ErrorsOnBadOptions) {
  const WitnessSdp p = build_witness_sdp(load_function("PARITY:3"));
  SdpOptions o;
  o.max_iterations = 10;
  EXPECT_ERRC(solve_sdp(p, o), Errc::NoConvergence);
  EXPECT_ERRC(solve_sdp(p, 1e-12), Errc::BadSpec);
}

TEST(ExtractCertificate, Values) {
  for (const auto& [spec, expected] : {std::pair{"PARITY:2", 2.0}, std::pair{"OR:2", std::sqrt(2.0)}}) {
    const WitnessSdp p = build_witness_sdp(load_function(spec));
    const AdversaryCertificate c = extract_certificate(solve_sdp(p), p);
    EXPECT_NEAR(c.value, expected, 1e-3) << spec;
    EXPECT_NEAR(adversary_ratio(c.gamma, p.f), c.value, 1e-12);
    for (std::uint32_t x = 0; x < p.f.size(); ++x)
      for (std::uint32_t y = 0; y < p.f.size(); ++y)
        if (p.f(x) == p.f(y)) EXPECT_EQ(c.gamma(x, y), 0.0);
    EXPECT_EQ(c.gamma, c.gamma.transpose());
  }
}

TEST(ExtractCertificate, DegenerateDual) {
  const WitnessSdp p = build_witness_sdp(load_function("OR:2"));
  SdpSolution sol = solve_sdp(p);
  sol.beta.setZero();
  sol.beta(0) = 1.0;  // only the false input survives: no pair left
  EXPECT_ERRC(extract_certificate(sol, p), Errc::DegenerateDual);
}

TEST(StrongDuality, AllFunctionsUpToThreeBits) {
  for (int n = 1; n <= 3; ++n)
    for (const BooleanFunction& f : all_functions(n)) {
      if (f.is_constant()) continue;
      const WitnessSdp p = build_witness_sdp(f);
      const SdpSolution sol = solve_sdp(p);
      const AdversaryCertificate c = extract_certificate(sol, p);
      EXPECT_LE(std::abs(sol.xi - c.value), 1e-3 * sol.xi) << f.bitstring();
    }
}

TEST(AdversaryRatio, Identity) {
  Eigen::MatrixXd g(2, 2);
  g << 0, 1, 1, 0;
  EXPECT_NEAR(adversary_ratio(g, load_function("01")), 1.0, 1e-14);
}

TEST(AdversaryRatio, ScaleAndSignInvariant) {
  const WitnessSdp p = build_witness_sdp(load_function("MAJ:3"));
  const Eigen::MatrixXd g = extract_certificate(solve_sdp(p), p).gamma;
  const double r = adversary_ratio(g, p.f);
  for (double c : {1e-3, 0.5, 7.0, 1e4}) EXPECT_NEAR(adversary_ratio(c * g, p.f), r, 1e-9 * r);
  EXPECT_NEAR(adversary_ratio(-g, p.f), r, 1e-9 * r);
}

TEST(AdversaryRatio, Errors) {
  const BooleanFunction f = load_function("PARITY:2");
  EXPECT_ERRC(adversary_ratio(Eigen::MatrixXd::Zero(4, 4), f), Errc::ZeroMatrix);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 4);
  bad(0, 3) = bad(3, 0) = 1.0;  // f(00) = f(11)
  EXPECT_ERRC(adversary_ratio(bad, f), Errc::PatternViolation);
  EXPECT_ERRC(adversary_ratio(Eigen::MatrixXd::Ones(2, 2), f), Errc::DimensionMismatch);
}
