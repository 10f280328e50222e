#include "advspan/spanprog.hpp"

#include <algorithm>

namespace advspan {

Eigen::Index CanonicalSpanProgram::row(std::uint32_t w) const {
  const auto& f0 = f.zeros();
  const auto it = std::lower_bound(f0.begin(), f0.end(), w);
  if (it == f0.end() || *it != w) throw Error(Errc::IndexOutOfRange, "row requested for a true input");
  return it - f0.begin();
}

namespace {

// Pair-constraint matrix of true input x: row w, column (j,k) holds
// v_{w,j}[k] when w_j != x_j.
Eigen::MatrixXd pair_matrix(const CanonicalSpanProgram& p, std::uint32_t x) {
  const int n = p.f.arity();
  const auto& f0 = p.f.zeros();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f0.size()), n * p.m);
  for (std::size_t r = 0; r < f0.size(); ++r) {
    const std::uint32_t w = f0[r];
    for (int j = 1; j <= n; ++j)
      if (p.f.bit(w, j) != p.f.bit(x, j)) m.row(r).segment((j - 1) * p.m, p.m) = p.vectors[w].col(j - 1).transpose();
  }
  return m;
}

constexpr int kRefineSweeps = 200;

void assemble(CanonicalSpanProgram& p) {
  const BooleanFunction& f = p.f;
  const int n = f.arity();
  auto& sp = p.program;
  sp.n = n;
  sp.set_sizes.assign(2 * n, p.m);
  sp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f.zeros().size()), 2 * n * p.m);
  for (std::size_t r = 0; r < f.zeros().size(); ++r) {
    const std::uint32_t w = f.zeros()[r];
    for (int j = 1; j <= n; ++j)
      sp.A.row(r).segment(p.column(j, 1 - f.bit(w, j), 0), p.m) = p.vectors[w].col(j - 1).transpose();
  }
  sp.t = Eigen::VectorXd::Ones(sp.A.rows());
}

}  // namespace

CanonicalSpanProgram canonical_from_gram(const BooleanFunction& f, const SdpSolution& sol, double rank_tol) {
  if (f.is_constant()) throw Error(Errc::ConstantFunction, "no canonical program for " + f.bitstring());
  const int n = f.arity();
  const Eigen::Index len = f.size();
  if (sol.X.rows() != len * n) throw Error(Errc::DimensionMismatch, "solution does not match the function");

  const Eigen::MatrixXd g = gram_factor(sol.X, rank_tol);
  CanonicalSpanProgram p;
  p.f = f;
  p.sdp_xi = sol.xi;
  p.m = g.rows();
  p.gram_residual = max_abs(g.transpose() * g - sol.X);
  if (p.gram_residual > 1e-6) {
    throw Error(Errc::GramFailure, "Gram reconstruction residual " + std::to_string(p.gram_residual));
  }
  p.vectors.resize(len);
  for (Eigen::Index s = 0; s < len; ++s) p.vectors[s] = g.middleCols(s * n, n);

  // Replace every input's vectors by that input's optimal witness until a
  // fixed point: true inputs take the minimum-norm z, false inputs the row
  // y* A. Both substitutions keep all pair constraints.
  for (int sweep = 0; sweep < kRefineSweeps; ++sweep) {
    assemble(p);
    std::vector<Eigen::MatrixXd> next = p.vectors;
    double change = 0.0;
    for (Eigen::Index s = 0; s < len; ++s) {
      const auto e = evaluate(p.program, static_cast<std::uint32_t>(s));
      if (e.value != f(static_cast<std::uint32_t>(s))) {
        throw Error(Errc::GramFailure, "program rejects its own input " + std::to_string(s));
      }
      const Eigen::RowVectorXd row = e.value ? Eigen::RowVectorXd(e.witness.transpose())
                                             : Eigen::RowVectorXd(e.witness.transpose() * p.program.A);
      for (int j = 1; j <= n; ++j) {
        const int b = f.bit(static_cast<std::uint32_t>(s), j);
        next[s].col(j - 1) = row.segment(p.column(j, e.value ? b : 1 - b, 0), p.m).transpose();
      }
      change = std::max(change, max_abs(next[s] - p.vectors[s]));
    }
    p.vectors = std::move(next);
    if (change < 1e-12) break;
  }

  // The refined vectors often span far fewer than m dimensions; rotate them
  // onto their numerical range. Inner products move by at most the dropped
  // singular values.
  Eigen::MatrixXd stacked(p.m, len * n);
  for (Eigen::Index s = 0; s < len; ++s) stacked.middleCols(s * n, n) = p.vectors[s];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const Eigen::VectorXd sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > 1e-9 * sv(0)) ++r;
  if (r < p.m) {
    const Eigen::MatrixXd basis = svd.matrixU().leftCols(r);
    for (auto& v : p.vectors) v = basis.transpose() * v;
    p.m = r;
  }
  assemble(p);
  for (auto x : f.ones()) {
    const Eigen::VectorXd miss = Eigen::VectorXd::Ones(f.zeros().size()) - pair_matrix(p, x) * p.vectors[x].reshaped();
    p.constraint_residual = std::max(p.constraint_residual, miss.cwiseAbs().maxCoeff());
  }
  if (p.constraint_residual > 1e-6) {
    throw Error(Errc::GramFailure, "pair constraint residual " + std::to_string(p.constraint_residual));
  }

  p.W = 0.0;
  for (Eigen::Index s = 0; s < len; ++s) p.W = std::max(p.W, p.input_witness(static_cast<std::uint32_t>(s)));

  return p;
}

}  // namespace advspan
