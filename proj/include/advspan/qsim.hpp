#pragma once

// State-vector simulation of query algorithms and exact acceptance
// probabilities of the three span-program evaluation algorithms.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "advspan/advsdp.hpp"
#include "advspan/boolfun.hpp"
#include "advspan/error.hpp"
#include "advspan/matkernel.hpp"

namespace advspan {

/// U_T V U_{T-1} V ... U_1 V U_0 applied to |0> on Q (x) W. Basis index
/// r * work_dim + w; query value r < n addresses coordinate r + 1, larger
/// values are left alone by the oracle.
struct QueryAlgorithm {
  int n = 0;
  int T = 0;
  Eigen::Index query_dim = 0;
  Eigen::Index work_dim = 1;
  std::vector<Eigen::MatrixXcd> unitaries;  // U_0 .. U_T
  Eigen::MatrixXcd pi0, pi1;

  Eigen::Index dim() const { return query_dim * work_dim; }
  void validate() const;
};

/// Diagonal of V_IND for input x.
Eigen::VectorXd phase_oracle(const QueryAlgorithm& a, std::uint32_t x);

struct QueryRun {
  // states[t][x] = psi_x^t after U_t; oracle_states[t][x] is the state just
  // after the (t+1)-th query, before U_{t+1}.
  std::vector<std::vector<Eigen::VectorXcd>> states;
  std::vector<std::vector<Eigen::VectorXcd>> oracle_states;
  Eigen::VectorXd success;  // ||Pi_{f(x)} psi_x^T||^2
  double max_error = 0;
};

QueryRun run_query_algorithm(const QueryAlgorithm& a, const BooleanFunction& f);

/// Two phase-kickback stages over the query values {x1, x2, idle}: the
/// relative phase of |x1>+|idle> is moved onto |x2>, queried again and
/// read out by a Hadamard.
QueryAlgorithm parity2_algorithm();

struct ProgressTrace {
  Eigen::MatrixXd gamma;  // sign chosen so the top eigenvalue is +||Gamma||
  bool negated = false;
  Eigen::VectorXd delta;  // principal unit eigenvector
  double norm = 0;        // ||Gamma||
  double step_bound = 0;  // 2 max_i ||Gamma o D_i||
  std::vector<double> M;         // M^(0..T)
  std::vector<double> M_oracle;  // M right after each query, before the unitary
  std::vector<double> drops;     // M^(t) - M^(t+1)
  double max_imag = 0;           // largest |Im <Gamma, W^(t)>|
  double error = 0;              // max_x (1 - success)
  double final_bound = 0;        // 2 ||X0||_F ||X1||_F ||Gamma||
  double two_thirds_bound = 0;        // (2/3) sqrt2 ||Gamma||
  Eigen::VectorXd success;
};

/// Throws AlgorithmTooWeak when some input is answered with error > 1/3.
ProgressTrace progress_trace(const QueryAlgorithm& a, const BooleanFunction& f, const AdversaryCertificate& cert);

/// Eigenphases of U with the weights |<beta|0>|^2.
struct PhaseSpectrum {
  Eigen::VectorXd phases;
  Eigen::VectorXd weights;
};

PhaseSpectrum phase_spectrum(const UnitarySpectrum& spectrum, const Eigen::VectorXcd& state);
PhaseSpectrum phase_spectrum(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state);

/// |sum_{k<2^a} e^{ik theta}|^2 / 4^a.
double qpe_kernel(double theta, int ancillas);

/// ceil(log2(1/precision)) + 1.
int qpe_ancillas(double precision);

/// Probability that ideal phase estimation reads all zeros. Throws
/// NotNormalized when the weights do not sum to 1 within 1e-8, and BadSpec
/// when 2^-a exceeds the precision.
double qpe_accept_probability(const PhaseSpectrum& spectrum, double precision, int ancillas);

struct Bracket {
  double ideal = 0;
  double low = 0;
  double high = 0;
};

/// Algorithm 1 with precision 1/(100W): the ideal kernel probability widened
/// by +-delta_e.
Bracket algorithm1_acceptance(const PhaseSpectrum& spectrum, double W, double delta_e = 0.1);

/// (1/tau) sum_{T=1..tau} (1/4)||(I + U^T)|0>||^2.
double search_accept_probability(const PhaseSpectrum& spectrum, int tau);
double search_accept_probability(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state, int tau);

/// (1/tau) sum_{T=1..tau} |<0|U^T|0>|^2.
double search_noregister_probability(const PhaseSpectrum& spectrum, int tau);
double search_noregister_probability(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state, int tau);

/// nu + (1 - nu)(1/2 + 1/(4 tau sin(Theta/2))): the false-input ceiling of
/// Algorithm 2 when |0> has weight nu on phases within Theta.
double algorithm2_false_bound(double nu, int tau, double big_theta);

/// ceil(100 W), ignoring the solver's last ~1e-6 so an integral W is not
/// rounded up past itself.
inline int search_rounds(double W) { return static_cast<int>(std::ceil(100.0 * W - 1e-6)); }

}  // namespace advspan
