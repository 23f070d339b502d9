#include "feec/postprocess.hpp"

#include "feec/errors.hpp"

#include <fmt/format.h>
#include <tbb/parallel_for.h>

#include <algorithm>

namespace feec
{

int select_dual_degree(Family sigma_family, int r, int k, int n, bool f_coexact, Family dual_family)
{
  if (k < 0 || k > n)
    throw ConfigError("select_dual_degree: k out of range");
  int rstar = r;
  if (!f_coexact && k >= 1) {
    // Trimmed and full spaces of 0-forms coincide.
    const bool full_prev = sigma_family == Family::Full || k - 1 == 0;
    if (full_prev)
      rstar = dual_family == Family::Full ? r + 2 : r + 1;
    else
      rstar = dual_family == Family::Full ? r + 1 : r;
  }
  if (dual_family == Family::Full)
    rstar = std::max(rstar, 1);
  return rstar;
}

DualLocalSpaces dual_spaces(int n, int k, int rstar, Family rho_family, Family u_family)
{
  if (rstar < 0)
    throw ConfigError("dual degree must be nonnegative");
  if (u_family == Family::Full && rstar < 1)
    throw ConfigError("the full dual family needs r* >= 1");
  if (rstar + 1 > max_basis_degree)
    throw ConfigError(fmt::format("dual degree r* = {} exceeds the supported degree range", rstar));
  DualLocalSpaces s;
  s.rstar = rstar;
  s.has_rho = k <= n - 1;
  s.harmonic = k == n;
  s.rho = {rho_family, rstar + 1, n - k - 1, true};
  s.u = {u_family, u_family == Family::Full ? rstar : rstar + 1, n - k, true};
  return s;
}

namespace
{

struct ClassBlocks
{
  Eigen::MatrixXd matrix;
  Eigen::VectorXd harmonic;  ///< (v_i, 1) for k = 0 or k = n
  int nrho = 0, nu = 0, npbar = 0;
};

ClassBlocks class_blocks(const Discretization& disc, int cls, const DualLocalSpaces& sp)
{
  const int n = disc.n();
  const int k = disc.k();
  ClassBlocks b;
  const SpaceTables& tu = disc.tables().get(sp.u, cls);
  b.nu = tu.nb;
  b.npbar = sp.harmonic ? 1 : 0;
  Eigen::MatrixXd Mr, C;
  if (sp.has_rho) {
    const SpaceTables& tr = disc.tables().get(sp.rho, cls);
    b.nrho = tr.nb;
    Mr = weighted_gram(tr.vol.val, tr.vol.val, tr.vol.w, ncomp(n, k + 1));
    C = weighted_gram(tu.vol.val, tr.vol.cod, tu.vol.w, ncomp(n, k));
  }
  const Eigen::MatrixXd Ks = weighted_gram(tu.vol.cod, tu.vol.cod, tu.vol.w, ncomp(n, k - 1));
  if (k == 0 || k == n)
    b.harmonic = weighted_gram(tu.vol.val, Eigen::MatrixXd::Ones(tu.vol.nq, 1), tu.vol.w, 1).col(0);
  const int m = b.nrho + b.nu + b.npbar;
  b.matrix = Eigen::MatrixXd::Zero(m, m);
  if (b.nrho) {
    b.matrix.topLeftCorner(b.nrho, b.nrho) = -Mr;
    b.matrix.block(b.nrho, 0, b.nu, b.nrho) = C;
    b.matrix.block(0, b.nrho, b.nrho, b.nu) = C.transpose();
  }
  b.matrix.block(b.nrho, b.nrho, b.nu, b.nu) = Ks;
  if (b.npbar) {
    b.matrix.block(b.nrho, b.nrho + b.nu, b.nu, 1) = b.harmonic;
    b.matrix.block(b.nrho + b.nu, b.nrho, 1, b.nu) = b.harmonic.transpose();
  }
  return b;
}

/// Values of a single-valued trace function on local facet f of a cell, in the facet frame.
Eigen::VectorXd trace_values(const SpaceTables& primal, const TraceSpace& ts, int cell, int f, const Eigen::VectorXd& coef)
{
  const FacetTable& ft = primal.facets[f];
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(ft.tr.rows());
  for (int b = 0; b < ts.boundary_size(); ++b)
    vals += coef(ts.global_dof(cell, b)) * ft.tr.col(ts.boundary_local[b]);
  return vals;
}

Eigen::VectorXd weighted_pairing(const Eigen::MatrixXd& table, const Eigen::VectorXd& values, const Eigen::VectorXd& w, int C)
{
  Eigen::VectorXd wv = values;
  for (Eigen::Index q = 0; q < w.size(); ++q)
    wv.segment(q * C, C) *= w(q);
  return table.transpose() * wv;
}

PostprocessLocal local_system(const Discretization& disc, const ClassBlocks& blocks, int cell,
                              const DiscreteSolution& sol, const FormFunction& f, const DualLocalSpaces& sp)
{
  const int n = disc.n();
  const int k = disc.k();
  const int cls = disc.mesh().cell_class[cell];
  PostprocessLocal out;
  out.matrix = blocks.matrix;
  out.nrho = blocks.nrho;
  out.nu = blocks.nu;
  out.npbar = blocks.npbar;
  out.rhs = Eigen::VectorXd::Zero(out.matrix.rows());
  const SpaceTables& tu = disc.tables().get(sp.u, cls);

  if (sp.has_rho) {
    const SpaceTables& tr = disc.tables().get(sp.rho, cls);
    const SpaceTables& up = disc.tables().get(disc.u_spec(), cls);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(out.nrho);
    for (int fc = 0; fc <= n; ++fc) {
      const Eigen::VectorXd vals = trace_values(up, disc.u_trace(), cell, fc, sol.uhat);
      r += weighted_pairing(tr.facets[fc].nor, vals, tr.facets[fc].w, ncomp(n - 1, k));
    }
    out.rhs.head(out.nrho) = -r;
  }

  Eigen::VectorXd rv = disc.load(cell, tu, f);
  if (k == 0)
    rv -= sol.p * blocks.harmonic;
  if (k >= 1) {
    const SpaceTables& sp_primal = disc.tables().get(disc.sigma_spec(), cls);
    for (int fc = 0; fc <= n; ++fc) {
      const Eigen::VectorXd vals = trace_values(sp_primal, disc.sigma_trace(), cell, fc, sol.sigmahat);
      rv -= weighted_pairing(tu.facets[fc].nor, vals, tu.facets[fc].w, ncomp(n - 1, k - 1));
    }
  }
  out.rhs.segment(out.nrho, out.nu) = rv;
  if (out.npbar)
    out.rhs(out.nrho + out.nu) = sol.ubar(cell) * disc.class_matrices(cls).volume;
  return out;
}

}  // namespace

PostprocessLocal postprocess_element(const Discretization& disc, int cell, const DiscreteSolution& sol,
                                     const FormFunction& f, const DualLocalSpaces& spaces)
{
  const ClassBlocks blocks = class_blocks(disc, disc.mesh().cell_class[cell], spaces);
  return local_system(disc, blocks, cell, sol, f, spaces);
}

PostprocessedFields postprocess(const Discretization& disc, const DiscreteSolution& sol, const FormFunction& f,
                                const DualLocalSpaces& spaces)
{
  const Mesh& mesh = disc.mesh();
  if (disc.k() == disc.n() && sol.ubar.size() != mesh.num_cells())
    throw ConfigError("postprocess: cell means ubar are missing");
  std::vector<ClassBlocks> blocks;
  std::vector<LocalFactor> factors;
  for (int cls = 0; cls < mesh.num_classes(); ++cls) {
    blocks.push_back(class_blocks(disc, cls, spaces));
    try {
      factors.emplace_back(blocks.back().matrix, cls);
    } catch (const SingularLocalBlock& e) {
      throw ConfigError(fmt::format("postprocessing: singular local problem (rcond {:.3e}); the dual pair is not stable",
                                    e.rcond()));
    }
  }
  PostprocessedFields out;
  out.spaces = spaces;
  out.rho.resize(mesh.num_cells());
  out.u.resize(mesh.num_cells());
  out.pbar.assign(mesh.num_cells(), 0.0);
  tbb::parallel_for(0, mesh.num_cells(), [&](int c) {
    const int cls = mesh.cell_class[c];
    const PostprocessLocal loc = local_system(disc, blocks[cls], c, sol, f, spaces);
    const Eigen::VectorXd x = factors[cls].solve(loc.rhs);
    out.rho[c] = x.head(loc.nrho);
    out.u[c] = x.segment(loc.nrho, loc.nu);
    if (loc.npbar)
      out.pbar[c] = x(loc.nrho + loc.nu);
  });
  return out;
}

}  // namespace feec
