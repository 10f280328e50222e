#include "advspan/advsdp.hpp"

#include <cmath>
#include <sstream>

namespace advspan {

WitnessSdp build_witness_sdp(const BooleanFunction& f) {
  if (f.is_constant()) {
    throw Error(Errc::ConstantFunction, "no (w,x) pairs for constant " + f.bitstring());
  }
  WitnessSdp p;
  p.f = f;
  p.n = f.arity();
  p.dim = static_cast<Eigen::Index>(f.size()) * p.n;
  for (auto w : f.zeros()) {
    for (auto x : f.ones()) {
      std::vector<std::pair<Eigen::Index, Eigen::Index>> e;
      for (int j = 1; j <= p.n; ++j)
        if (f.bit(w, j) != f.bit(x, j)) e.emplace_back(p.index(w, j), p.index(x, j));
      p.pairs.emplace_back(w, x);
      p.entries.push_back(std::move(e));
    }
  }
  return p;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Conic form  min c'v  s.t.  A v = b,  v in S+ x R+ x R+^{2^n},  with
// v = (svec X, xi, slack_s) and svec scaled so that <svec A, svec B> = <A, B>.
class ConicForm {
 public:
  explicit ConicForm(const WitnessSdp& p) : p_(p), n_(p.dim) {
    tri_ = n_ * (n_ + 1) / 2;
    offset_.resize(n_);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < n_; ++j) {
      offset_[j] = k;
      k += n_ - j;
    }
    const Eigen::Index inputs = static_cast<Eigen::Index>(p.inequality_count());
    const Eigen::Index eqs = static_cast<Eigen::Index>(p.equality_count());
    cols_ = tri_ + 1 + inputs;
    rows_ = eqs + inputs;
    a_ = Eigen::MatrixXd::Zero(rows_, cols_);
    b_ = Eigen::VectorXd::Zero(rows_);
    c_ = Eigen::VectorXd::Zero(cols_);
    c_(tri_) = 1.0;
    for (Eigen::Index r = 0; r < eqs; ++r) {
      for (const auto& [i, j] : p.entries[r]) a_(r, svec_index(i, j)) = 1.0 / kSqrt2;
      b_(r) = 1.0;
    }
    for (Eigen::Index s = 0; s < inputs; ++s) {
      const Eigen::Index r = eqs + s;
      a_(r, tri_) = 1.0;
      a_(r, tri_ + 1 + s) = -1.0;
      for (int j = 1; j <= p.n; ++j) {
        const Eigen::Index d = p.index(static_cast<std::uint32_t>(s), j);
        a_(r, svec_index(d, d)) = -1.0;
      }
    }
    gram_.compute(a_ * a_.transpose());
  }

  Eigen::Index svec_index(Eigen::Index i, Eigen::Index j) const {
    if (i < j) std::swap(i, j);
    return offset_[j] + (i - j);
  }

  Eigen::VectorXd svec(const Eigen::MatrixXd& m) const {
    Eigen::VectorXd v(tri_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      v(offset_[j]) = m(j, j);
      for (Eigen::Index i = j + 1; i < n_; ++i) v(offset_[j] + i - j) = kSqrt2 * m(i, j);
    }
    return v;
  }

  Eigen::MatrixXd smat(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd m(n_, n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      m(j, j) = v(offset_[j]);
      for (Eigen::Index i = j + 1; i < n_; ++i) m(i, j) = m(j, i) = v(offset_[j] + i - j) / kSqrt2;
    }
    return m;
  }

  // Projects v onto {A v = b}; `mu` receives (AA')^{-1}(Av - b).
  Eigen::VectorXd project_affine(const Eigen::VectorXd& v, Eigen::VectorXd& mu) const {
    mu = gram_.solve(a_ * v - b_);
    return v - a_.transpose() * mu;
  }

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::VectorXd& c() const { return c_; }
  Eigen::Index tri() const { return tri_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index eq_rows() const { return static_cast<Eigen::Index>(p_.equality_count()); }

 private:
  const WitnessSdp& p_;
  Eigen::Index n_, tri_ = 0, rows_ = 0, cols_ = 0;
  std::vector<Eigen::Index> offset_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_, c_;
  Eigen::LLT<Eigen::MatrixXd> gram_;
};

// PSD projection with the previous eigenbasis as a warm start: in that basis
// the matrix is nearly diagonal and Jacobi needs one or two sweeps.
class PsdProjector {
 public:
  explicit PsdProjector(Eigen::Index n) : basis_(Eigen::MatrixXd::Identity(n, n)) {}

  Eigen::MatrixXd operator()(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd rotated = basis_.transpose() * m * basis_;
    rotated = (rotated + rotated.transpose()) / 2.0;
    const auto es = eig_hermitian(rotated, 1e-8);
    basis_ = basis_ * es.vectors;
    min_eig_ = es.values.size() ? es.values(0) : 0.0;
    const Eigen::VectorXd clipped = es.values.cwiseMax(0.0);
    Eigen::MatrixXd out = basis_ * clipped.asDiagonal() * basis_.transpose();
    return (out + out.transpose()) / 2.0;
  }

  double last_min_eigenvalue() const { return min_eig_; }

 private:
  Eigen::MatrixXd basis_;
  double min_eig_ = 0.0;
};

Eigen::MatrixXd dual_slack(const WitnessSdp& p, const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p.dim, p.dim);
  for (std::uint32_t x = 0; x < p.inequality_count(); ++x)
    for (int j = 1; j <= p.n; ++j) s(p.index(x, j), p.index(x, j)) = beta(x);
  for (std::size_t k = 0; k < p.pairs.size(); ++k) {
    for (const auto& [i, j] : p.entries[k]) {
      s(i, j) -= alpha(static_cast<Eigen::Index>(k)) / 2.0;
      s(j, i) -= alpha(static_cast<Eigen::Index>(k)) / 2.0;
    }
  }
  return s;
}

}  // namespace

SdpResiduals evaluate_residuals(const WitnessSdp& p, const SdpSolution& sol) {
  SdpResiduals r;
  for (const auto& e : p.entries) {
    double sum = 0.0;
    for (const auto& [i, j] : e) sum += sol.X(i, j);
    r.equality = std::max(r.equality, std::abs(sum - 1.0));
  }
  for (std::uint32_t s = 0; s < p.inequality_count(); ++s) {
    double sum = 0.0;
    for (int j = 1; j <= p.n; ++j) sum += sol.X(p.index(s, j), p.index(s, j));
    r.row_sum = std::max(r.row_sum, sum - sol.xi);
  }
  const auto ex = eig_hermitian(sol.X, 1e-8);
  r.psd = std::max(0.0, -ex.values(0));
  const auto es = eig_hermitian(dual_slack(p, sol.alpha, sol.beta), 1e-8);
  r.dual_cone = std::max({0.0, -es.values(0), -sol.beta.minCoeff(), sol.beta.sum() - 1.0});
  r.gap = std::abs(sol.xi - sol.alpha.sum());
  return r;
}

SdpSolution solve_sdp(const WitnessSdp& p, double tol) {
  SdpOptions options;
  options.tol = tol;
  return solve_sdp(p, options);
}

SdpSolution solve_sdp(const WitnessSdp& p, const SdpOptions& options) {
  if (!(options.tol >= 1e-9)) throw Error(Errc::BadSpec, "solver tolerance must be >= 1e-9");
  const ConicForm form(p);
  const Eigen::Index tri = form.tri();
  const Eigen::Index cols = form.cols();
  const Eigen::Index eqs = form.eq_rows();

  PsdProjector psd(p.dim);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd x(cols), z_prev(cols), mu;
  double rho = options.rho;
  const double alpha = options.relaxation;

  const auto project_cone = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(cols);
    out.head(tri) = form.svec(psd(form.smat(v.head(tri))));
    out.tail(cols - tri) = v.tail(cols - tri).cwiseMax(0.0);
    return out;
  };

  SdpSolution sol;
  double primal_res = 0, dual_res = 0, gap = 0;
  int it = 0;
  bool done = false;
  for (it = 1; it <= options.max_iterations; ++it) {
    x = form.project_affine(z - u - form.c() / rho, mu);
    const Eigen::VectorXd relaxed = alpha * x + (1.0 - alpha) * z;
    z_prev = z;
    z = project_cone(relaxed + u);
    u += relaxed - z;

    if (it % options.check_every != 0) continue;
    // Multipliers of A v = b  (dual problem: max b'y, c - A'y in K*).
    const Eigen::VectorXd y = -rho * mu;
    const double xi = z(tri);
    primal_res = (x - z).cwiseAbs().maxCoeff();
    dual_res = rho * (z - z_prev).cwiseAbs().maxCoeff();
    gap = std::abs(xi - y.head(eqs).sum());
    if (primal_res <= options.tol && dual_res <= options.tol && gap <= options.tol * std::max(1.0, xi)) {
      done = true;
      break;
    }
    // Residual balancing; the scaled dual u follows rho.
    if (it % (10 * options.check_every) == 0) {
      if (primal_res > 10.0 * dual_res) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual_res > 10.0 * primal_res) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  if (!done) {
    std::ostringstream msg;
    msg << "no convergence after " << options.max_iterations << " iterations (primal " << primal_res
        << ", dual " << dual_res << ", gap " << gap << ")";
    throw Error(Errc::NoConvergence, msg.str());
  }

  const Eigen::VectorXd y = -rho * mu;
  sol.X = form.smat(z.head(tri));
  sol.xi = z(tri);
  sol.alpha = y.head(eqs);
  sol.beta = y.tail(static_cast<Eigen::Index>(p.inequality_count()));
  sol.dual_objective = sol.alpha.sum();
  sol.residuals = evaluate_residuals(p, sol);
  sol.residuals.consensus = std::max(primal_res, dual_res);
  sol.residuals.iterations = it;
  return sol;
}

AdversaryCertificate extract_certificate(const SdpSolution& sol, const WitnessSdp& p, double beta_tol) {
  const BooleanFunction& f = p.f;
  const Eigen::Index len = f.size();
  const double top = std::max(0.0, sol.beta.maxCoeff());
  std::vector<bool> keep(len);
  AdversaryCertificate cert;
  for (Eigen::Index s = 0; s < len; ++s) {
    keep[s] = sol.beta(s) > beta_tol * top && top > 0.0;
    if (!keep[s]) cert.dropped.push_back(static_cast<std::uint32_t>(s));
  }
  cert.gamma = Eigen::MatrixXd::Zero(len, len);
  bool any = false;
  for (std::size_t k = 0; k < p.pairs.size(); ++k) {
    const auto [w, x] = p.pairs[k];
    if (!keep[w] || !keep[x]) continue;
    const double g = sol.alpha(static_cast<Eigen::Index>(k)) / (2.0 * std::sqrt(sol.beta(w) * sol.beta(x)));
    cert.gamma(w, x) = cert.gamma(x, w) = g;
    any = any || g != 0.0;
  }
  if (!any) {
    std::string which;
    for (auto s : cert.dropped) which += " " + std::to_string(s);
    throw Error(Errc::DegenerateDual, "dual weight vanishes; dropped inputs:" + which);
  }
  cert.norm = spectral_norm(cert.gamma);
  cert.coordinate_norms.resize(f.arity());
  for (int i = 1; i <= f.arity(); ++i)
    cert.coordinate_norms(i - 1) = spectral_norm(hadamard(cert.gamma, difference_matrix(f, i)));
  cert.value = cert.norm / cert.coordinate_norms.maxCoeff();

  Eigen::VectorXd root(len);
  for (Eigen::Index s = 0; s < len; ++s) root(s) = keep[s] ? std::sqrt(sol.beta(s)) : 0.0;
  cert.beta_alignment = root.dot(cert.gamma * root) / (root.squaredNorm() * cert.norm);
  return cert;
}

}  // namespace advspan
