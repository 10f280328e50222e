#include "advspan/qsim.hpp"

#include <algorithm>

namespace advspan {

namespace {

void check_projector(const Eigen::MatrixXcd& p, Eigen::Index d, const char* name) {
  if (p.rows() != d || p.cols() != d) throw Error(Errc::DimensionMismatch, std::string(name) + " has the wrong size");
  if (max_abs(p * p - p) > 1e-9 || !is_hermitian(p, 1e-9)) {
    throw Error(Errc::DimensionMismatch, std::string(name) + " is not an orthogonal projector");
  }
}

// Hadamard on the span of basis vectors a and b.
Eigen::MatrixXcd hadamard_pair(Eigen::Index d, Eigen::Index a, Eigen::Index b) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(d, d);
  const double r = 1.0 / std::sqrt(2.0);
  h(a, a) = r;
  h(a, b) = r;
  h(b, a) = r;
  h(b, b) = -r;
  return h;
}

}  // namespace

void QueryAlgorithm::validate() const {
  const Eigen::Index d = dim();
  if (n < 1 || query_dim < n || work_dim < 1) {
    throw Error(Errc::DimensionMismatch, "query register must address all n coordinates");
  }
  if (T < 0 || unitaries.size() != static_cast<std::size_t>(T + 1)) {
    throw Error(Errc::DimensionMismatch, "need T + 1 unitaries");
  }
  for (const auto& u : unitaries) {
    if (u.rows() != d || u.cols() != d) throw Error(Errc::DimensionMismatch, "unitary has the wrong size");
    if (max_abs(u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)) > 1e-9) {
      throw Error(Errc::NotUnitary, "algorithm step is not unitary");
    }
  }
  check_projector(pi0, d, "Pi0");
  check_projector(pi1, d, "Pi1");
  if (max_abs(pi0 + pi1 - Eigen::MatrixXcd::Identity(d, d)) > 1e-9 || max_abs(pi0 * pi1) > 1e-9) {
    throw Error(Errc::DimensionMismatch, "output projectors must be complementary");
  }
}

Eigen::VectorXd phase_oracle(const QueryAlgorithm& a, std::uint32_t x) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(a.dim());
  for (int r = 0; r < a.n; ++r)
    if ((x >> (a.n - r - 1)) & 1u) d.segment(r * a.work_dim, a.work_dim).setConstant(-1.0);
  return d;
}

QueryRun run_query_algorithm(const QueryAlgorithm& a, const BooleanFunction& f) {
  a.validate();
  if (f.arity() != a.n) throw Error(Errc::DimensionMismatch, "algorithm and function arities differ");
  const std::uint32_t len = f.size();
  QueryRun run;
  run.states.assign(a.T + 1, std::vector<Eigen::VectorXcd>(len));
  run.oracle_states.assign(a.T, std::vector<Eigen::VectorXcd>(len));
  run.success.resize(len);
  for (std::uint32_t x = 0; x < len; ++x) {
    const Eigen::VectorXd oracle = phase_oracle(a, x);
    Eigen::VectorXcd psi = a.unitaries[0].col(0);
    run.states[0][x] = psi;
    for (int t = 1; t <= a.T; ++t) {
      psi = oracle.cast<cplx>().cwiseProduct(psi);
      run.oracle_states[t - 1][x] = psi;
      psi = a.unitaries[t] * psi;
      run.states[t][x] = psi;
    }
    const Eigen::MatrixXcd& right = f(x) ? a.pi1 : a.pi0;
    run.success(x) = (right * psi).squaredNorm();
    run.max_error = std::max(run.max_error, 1.0 - run.success(x));
  }
  return run;
}

QueryAlgorithm parity2_algorithm() {
  // Query values: 0 -> x1, 1 -> x2, 2 -> idle.
  QueryAlgorithm a;
  a.n = 2;
  a.T = 2;
  a.query_dim = 3;
  a.work_dim = 1;
  Eigen::MatrixXcd swap01 = Eigen::MatrixXcd::Identity(3, 3);
  swap01.row(0).swap(swap01.row(1));
  a.unitaries = {hadamard_pair(3, 0, 2), swap01, hadamard_pair(3, 1, 2)};
  a.pi1 = Eigen::MatrixXcd::Zero(3, 3);
  a.pi1(2, 2) = 1.0;
  a.pi0 = Eigen::MatrixXcd::Identity(3, 3) - a.pi1;
  return a;
}

ProgressTrace progress_trace(const QueryAlgorithm& a, const BooleanFunction& f, const AdversaryCertificate& cert) {
  const QueryRun run = run_query_algorithm(a, f);
  if (run.max_error > 1.0 / 3.0 + 1e-12) {
    throw Error(Errc::AlgorithmTooWeak, "worst-case error " + std::to_string(run.max_error) + " exceeds 1/3");
  }
  const std::uint32_t len = f.size();
  if (cert.gamma.rows() != len) throw Error(Errc::DimensionMismatch, "adversary matrix does not match f");

  ProgressTrace tr;
  tr.gamma = cert.gamma;
  auto es = eig_hermitian(tr.gamma);
  if (-es.values(0) > es.values(es.size() - 1) + 1e-12 * std::abs(es.values(0))) {
    tr.gamma = -tr.gamma;
    tr.negated = true;
    es = eig_hermitian(tr.gamma);
  }
  tr.norm = es.values(es.size() - 1);
  tr.delta = es.vectors.col(es.size() - 1);
  double worst = 0.0;
  for (int i = 1; i <= f.arity(); ++i)
    worst = std::max(worst, spectral_norm(hadamard(tr.gamma, difference_matrix(f, i))));
  tr.step_bound = 2.0 * worst;

  auto measure = [&](const std::vector<Eigen::VectorXcd>& states) {
    cplx m = 0.0;
    for (std::uint32_t x = 0; x < len; ++x)
      for (std::uint32_t y = 0; y < len; ++y)
        if (tr.gamma(x, y) != 0.0) m += tr.gamma(x, y) * tr.delta(x) * tr.delta(y) * states[y].dot(states[x]);
    tr.max_imag = std::max(tr.max_imag, std::abs(m.imag()));
    return m.real();
  };
  for (const auto& s : run.states) tr.M.push_back(measure(s));
  for (const auto& s : run.oracle_states) tr.M_oracle.push_back(measure(s));
  for (int t = 0; t < a.T; ++t) tr.drops.push_back(tr.M[t] - tr.M[t + 1]);

  tr.success = run.success;
  tr.error = run.max_error;
  double right = 0.0, wrong = 0.0;
  for (std::uint32_t x = 0; x < len; ++x) {
    const double w = tr.delta(x) * tr.delta(x);
    right += w * run.success(x);
    wrong += w * (1.0 - run.success(x));
  }
  tr.final_bound = 2.0 * std::sqrt(std::max(0.0, right) * std::max(0.0, wrong)) * tr.norm;
  tr.two_thirds_bound = 2.0 / 3.0 * std::sqrt(2.0) * tr.norm;
  return tr;
}

PhaseSpectrum phase_spectrum(const UnitarySpectrum& spectrum, const Eigen::VectorXcd& state) {
  if (spectrum.vectors.rows() != state.size()) throw Error(Errc::DimensionMismatch, "state does not fit U");
  PhaseSpectrum out;
  out.phases = spectrum.phases;
  out.weights = (spectrum.vectors.adjoint() * state).cwiseAbs2();
  return out;
}

PhaseSpectrum phase_spectrum(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state) {
  return phase_spectrum(eig_unitary(u), state);
}

double qpe_kernel(double theta, int ancillas) {
  const double count = std::ldexp(1.0, ancillas);
  const double half = std::sin(theta / 2.0);
  if (std::abs(half) < 1e-12) return 1.0;
  const double num = std::sin(count * theta / 2.0);
  return (num * num) / (count * count * half * half);
}

int qpe_ancillas(double precision) {
  if (!(precision > 0.0 && precision < 1.0)) throw Error(Errc::BadSpec, "precision must lie in (0, 1)");
  return static_cast<int>(std::ceil(std::log2(1.0 / precision))) + 1;
}

double qpe_accept_probability(const PhaseSpectrum& spectrum, double precision, int ancillas) {
  const double total = spectrum.weights.sum();
  if (std::abs(total - 1.0) > 1e-8) {
    throw Error(Errc::NotNormalized, "overlap weights sum to " + std::to_string(total));
  }
  if (ancillas < 0 || std::ldexp(1.0, -ancillas) > precision) {
    throw Error(Errc::BadSpec, "2^-a must not exceed the precision");
  }
  double p = 0.0;
  for (Eigen::Index k = 0; k < spectrum.phases.size(); ++k) p += spectrum.weights(k) * qpe_kernel(spectrum.phases(k), ancillas);
  return p;
}

Bracket algorithm1_acceptance(const PhaseSpectrum& spectrum, double W, double delta_e) {
  const double precision = 1.0 / (100.0 * W);
  Bracket b;
  b.ideal = qpe_accept_probability(spectrum, precision, qpe_ancillas(precision));
  b.low = b.ideal - delta_e;
  b.high = b.ideal + delta_e;
  return b;
}

double search_accept_probability(const PhaseSpectrum& spectrum, int tau) {
  if (tau < 1) throw Error(Errc::BadSpec, "tau must be positive");
  double p = 0.0;
  for (Eigen::Index k = 0; k < spectrum.phases.size(); ++k) {
    double avg = 0.0;
    for (int t = 1; t <= tau; ++t) avg += 0.5 * (1.0 + std::cos(t * spectrum.phases(k)));
    p += spectrum.weights(k) * avg / tau;
  }
  return p;
}

double search_accept_probability(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state, int tau) {
  return search_accept_probability(phase_spectrum(u, state), tau);
}

double search_noregister_probability(const PhaseSpectrum& spectrum, int tau) {
  if (tau < 1) throw Error(Errc::BadSpec, "tau must be positive");
  double p = 0.0;
  for (int t = 1; t <= tau; ++t) {
    cplx amp = 0.0;
    for (Eigen::Index k = 0; k < spectrum.phases.size(); ++k) amp += spectrum.weights(k) * std::polar(1.0, t * spectrum.phases(k));
    p += std::norm(amp);
  }
  return p / tau;
}

double search_noregister_probability(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state, int tau) {
  return search_noregister_probability(phase_spectrum(u, state), tau);
}

double algorithm2_false_bound(double nu, int tau, double big_theta) {
  return nu + (1.0 - nu) * (0.5 + 1.0 / (4.0 * tau * std::sin(big_theta / 2.0)));
}

}  // namespace advspan
