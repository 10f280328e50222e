#include "advspan/spectral.hpp"

#include <algorithm>
#include <ostream>

namespace advspan {

namespace {

// Diagonal of Pibar(s) over I: one on the unavailable columns.
Eigen::VectorXd unavailable(const CanonicalSpanProgram& p, std::uint32_t s) {
  return Eigen::VectorXd::Ones(p.program.A.cols()) - p.program.availability(s);
}

void check_input(const BooleanFunction& f, std::uint32_t s) {
  if (s >= f.size()) throw Error(Errc::IndexOutOfRange, "input outside {0,1}^n");
}

}  // namespace

Eigen::VectorXd ProgramGraph::pi_diagonal(std::uint32_t s) const {
  if (s >= (std::uint32_t{1} << n)) throw Error(Errc::IndexOutOfRange, "input outside {0,1}^n");
  Eigen::VectorXd d = Eigen::VectorXd::Ones(dim());
  for (int j = 1; j <= n; ++j) {
    const int b = static_cast<int>((s >> (n - j)) & 1u);
    d.segment(f0 + 1 + ((j - 1) * 2 + (1 - b)) * block, block).setZero();
  }
  return d;
}

ProgramGraph build_program_graph(const CanonicalSpanProgram& p) {
  p.program.validate();
  ProgramGraph g;
  g.n = p.f.arity();
  g.f0 = p.program.A.rows();
  g.width = p.program.A.cols();
  g.block = p.m;
  g.B.resize(g.f0, 1 + g.width);
  g.B.col(0) = p.scaled_target();
  g.B.rightCols(g.width) = p.program.A;

  const Eigen::Index d = g.dim();
  g.A = Eigen::MatrixXd::Zero(d, d);
  g.A.topRightCorner(g.f0, 1 + g.width) = g.B;
  g.A.bottomLeftCorner(1 + g.width, g.f0) = g.B.transpose();
  g.delta = nullspace_projector(g.A);
  return g;
}

InputGraph build_input_graph(const ProgramGraph& g, const CanonicalSpanProgram& p, std::uint32_t s) {
  check_input(p.f, s);
  InputGraph ig;
  ig.s = s;
  ig.value = p.f(s);
  ig.f0 = g.f0;
  ig.width = g.width;
  const Eigen::Index f0 = g.f0, w = g.width;
  const Eigen::MatrixXd pibar = unavailable(p, s).asDiagonal();

  ig.B_false = Eigen::MatrixXd::Zero(f0 + w, w);
  ig.B_false.topRows(f0) = p.program.A;
  ig.B_false.bottomRows(w) = pibar;

  ig.B_true = Eigen::MatrixXd::Zero(f0 + w, 1 + w);
  ig.B_true.col(0).head(f0) = p.scaled_target();
  ig.B_true.rightCols(w) = ig.B_false;

  const Eigen::Index rows = f0 + w, d = rows + 1 + w;
  ig.A_Gs = Eigen::MatrixXd::Zero(d, d);
  ig.A_Gs.topRightCorner(rows, 1 + w) = ig.B_true;
  ig.A_Gs.bottomLeftCorner(1 + w, rows) = ig.B_true.transpose();
  ig.pi_s = g.pi(s);
  return ig;
}

ZeroWitness zero_witness(const CanonicalSpanProgram& p, std::uint32_t s) {
  check_input(p.f, s);
  const int n = p.f.arity();
  const Eigen::Index f0 = p.program.A.rows(), w = p.program.A.cols();
  const double W = p.W, ws = p.input_witness(s);
  const Eigen::VectorXd pibar = unavailable(p, s);
  ZeroWitness z;

  if (p.f(s)) {
    z.psi = Eigen::VectorXd::Zero(1 + w);
    z.psi(0) = -3.0 * std::sqrt(W);
    for (int j = 1; j <= n; ++j) z.psi.segment(1 + p.column(j, p.f.bit(s, j), 0), p.m) = p.vectors[s].col(j - 1);
    const Eigen::VectorXd top = z.psi(0) * p.scaled_target() + p.program.A * z.psi.tail(w);
    const Eigen::VectorXd bottom = pibar.cwiseProduct(z.psi.tail(w));
    z.residual = std::sqrt(top.squaredNorm() + bottom.squaredNorm());
    z.overlap = z.psi(0) * z.psi(0) / z.psi.squaredNorm();
    z.bound = 0.9;
    z.closed_form = 9.0 * W / (9.0 * W + ws);
    return z;
  }

  z.psi = Eigen::VectorXd::Zero(f0 + w);
  z.psi(p.row(s)) = -1.0;
  for (int j = 1; j <= n; ++j) z.psi.segment(f0 + p.column(j, 1 - p.f.bit(s, j), 0), p.m) = p.vectors[s].col(j - 1);
  z.residual = (p.program.A.transpose() * z.psi.head(f0) + pibar.cwiseProduct(z.psi.tail(w))).norm();
  const double overlap = p.scaled_target().dot(z.psi.head(f0));
  z.overlap = overlap * overlap / z.psi.squaredNorm();
  z.bound = 1.0 / (9.0 * W * (W + 1.0));
  z.closed_form = 1.0 / (9.0 * W * (1.0 + ws));
  return z;
}

Eigen::VectorXd zero_witness_vectors(const CanonicalSpanProgram& p, std::uint32_t s) {
  ZeroWitness z = zero_witness(p, s);
  if (z.residual > 1e-6 || z.overlap < z.bound - 1e-9) {
    throw Error(Errc::WitnessViolation, "zero witness residual " + std::to_string(z.residual) + ", overlap " +
                                            std::to_string(z.overlap) + " against " + std::to_string(z.bound));
  }
  return std::move(z.psi);
}

Eigen::VectorXd eigenvalue_one_vector(const ProgramGraph& g, const CanonicalSpanProgram& p, std::uint32_t s) {
  if (!p.f(s)) throw Error(Errc::WrongBranch, "eigenvalue-one vector needs a true input");
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(g.dim());
  phi.tail(1 + g.width) = zero_witness_vectors(p, s);
  return phi;
}

std::vector<LemmaRow> effective_gap_profile(const InputGraph& ig, double W, const std::vector<double>& c_grid) {
  if (ig.value) throw Error(Errc::WrongBranch, "effective gap applies to false inputs");
  const auto es = eig_hermitian(ig.A_Gs);
  const Eigen::VectorXd weight = es.vectors.row(ig.mu0()).transpose().cwiseAbs2();
  std::vector<LemmaRow> rows;
  for (double c : c_grid) {
    LemmaRow r;
    r.parameter = c;
    for (Eigen::Index k = 0; k < es.size(); ++k)
      if (std::abs(es.values(k)) <= c / W) r.lhs += weight(k);
    r.rhs = 72.0 * c * c * (1.0 + 1.0 / W);
    r.margin = r.rhs - r.lhs;
    rows.push_back(r);
  }
  return rows;
}

std::vector<LemmaRow> phase_gap_profile(const JordanDecomposition<double>& jd, const InputGraph& ig, double W,
                                        const std::vector<double>& theta_grid) {
  if (ig.value) throw Error(Errc::WrongBranch, "phase gap applies to false inputs");
  const UnitarySpectrum sp = jd.spectrum();
  const Eigen::Index mu0 = ig.f0;  // program-space index
  std::vector<LemmaRow> rows;
  for (double big : theta_grid) {
    LemmaRow r;
    r.parameter = big;
    for (Eigen::Index k = 0; k < sp.phases.size(); ++k)
      if (std::abs(sp.phases(k)) <= big) r.lhs += std::norm(sp.vectors(mu0, k));
    const double root = 2.0 * std::sqrt(6.0 * big * W) + big / 2.0;
    r.rhs = root * root;
    r.margin = r.rhs - r.lhs;
    rows.push_back(r);
  }
  return rows;
}

PsdBoundProfile psd_spectral_bound_check(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                                         const std::vector<double>& gamma_grid) {
  if (x.rows() != x.cols() || t.size() != x.rows()) throw Error(Errc::DimensionMismatch, "X and t disagree");
  const auto ex = eig_hermitian(x, 1e-9);
  if (ex.size() && ex.values.minCoeff() < -1e-8 * std::max(1.0, ex.values.cwiseAbs().maxCoeff())) {
    throw Error(Errc::NotPSD, "X has a negative eigenvalue");
  }
  PsdBoundProfile out;
  const Eigen::MatrixXd null = nullspace_basis(x);
  out.delta = (null.transpose() * t).squaredNorm();
  if (out.delta <= 1e-14 * std::max(1.0, t.squaredNorm())) {
    throw Error(Errc::NoNullWitness, "t is orthogonal to null(X)");
  }

  const Eigen::MatrixXd xp = x + t * t.transpose();
  const auto es = eig_hermitian(xp, 1e-9);
  const double scale = std::max(1.0, es.size() ? es.values.cwiseAbs().maxCoeff() : 0.0);
  for (double gamma : gamma_grid) {
    LemmaRow r;
    r.parameter = gamma;
    for (Eigen::Index k = 0; k < es.size(); ++k) {
      const double theta = es.values(k);
      if (theta > 1e-12 * scale && theta <= gamma) {
        const double overlap = es.vectors.col(k).dot(t);
        r.lhs += overlap * overlap / theta;
      }
    }
    r.rhs = 4.0 * gamma / out.delta;
    r.margin = r.rhs - r.lhs;
    out.rows.push_back(r);
  }
  return out;
}

std::vector<CompositionRow> small_eigenvalue_profile(const InputGraph& ig, double W,
                                                     const std::vector<double>& c_grid) {
  if (ig.value) throw Error(Errc::WrongBranch, "small-eigenvalue bound applies to false inputs");
  const auto es = eig_hermitian(ig.A_Gs);
  const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
  const double delta = 1.0 / (9.0 * W * (W + 1.0));
  const Eigen::MatrixXd x = ig.B_false * ig.B_false.transpose();

  std::vector<double> gammas2;
  for (double c : c_grid) gammas2.push_back((c / W) * (c / W));
  const PsdBoundProfile psd = psd_spectral_bound_check(x, ig.row_target(), gammas2);

  std::vector<CompositionRow> rows;
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    CompositionRow r;
    r.c = c_grid[i];
    const double gamma = r.c / W;
    for (Eigen::Index k = 0; k < es.size(); ++k) {
      const double rho = std::abs(es.values(k));
      // Same cutoff as the PSD sum, applied to rho^2.
      if (rho * rho > 1e-12 * scale * scale && rho <= gamma) r.adjacency_lhs += std::norm(es.vectors(ig.mu0(), k));
    }
    r.psd_lhs = psd.rows[i].lhs;
    r.psd_rhs = psd.rows[i].rhs;
    r.rhs = 8.0 * gamma * gamma / delta;
    r.rhs_lemma = 72.0 * r.c * r.c * (1.0 + 1.0 / W);
    r.margin = r.rhs - r.adjacency_lhs;
    rows.push_back(r);
  }
  return rows;
}

double spectrum_symmetry_defect(const Eigen::MatrixXd& adjacency) {
  const Eigen::VectorXd v = eig_hermitian(adjacency).values;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) worst = std::max(worst, std::abs(v(k) + v(v.size() - 1 - k)));
  return worst;
}

void write_edge_list(std::ostream& out, const Eigen::MatrixXd& biadjacency) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out.precision(17);
  for (Eigen::Index i = 0; i < biadjacency.rows(); ++i)
    for (Eigen::Index j = 0; j < biadjacency.cols(); ++j)
      if (biadjacency(i, j) != 0.0) out << i << ' ' << j << ' ' << biadjacency(i, j) << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace advspan
