#include "feec/assembly.hpp"

#include "feec/errors.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>

namespace feec
{

namespace
{

Eigen::MatrixXd boundary_trace_matrix(const SpaceTables& t, const std::vector<int>& boundary, int n)
{
  const int C = ncomp(n - 1, t.k);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(boundary.size()), t.nb);
  for (const FacetTable& ft : t.facets) {
    Eigen::MatrixXd tb(ft.tr.rows(), static_cast<Eigen::Index>(boundary.size()));
    for (std::size_t a = 0; a < boundary.size(); ++a)
      tb.col(static_cast<Eigen::Index>(a)) = ft.tr.col(boundary[a]);
    out += weighted_gram(tb, ft.tr, ft.w, C);
  }
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& M, const std::vector<int>& cols)
{
  Eigen::MatrixXd out(M.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = M.col(cols[j]);
  return out;
}

}  // namespace

Discretization::Discretization(const Mesh& mesh, const StablePair& pair, int quad_degree) : mesh_(&mesh), pair_(pair)
{
  pair_.validate();
  if (mesh.n != pair_.n)
    throw DimensionMismatch("Discretization: mesh and stable pair have different dimensions");
  if (quad_degree <= 0)
    quad_degree = std::max(2 * (pair_.r + 3) + 2, 12);
  tables_ = std::make_unique<ElementTables>(mesh, quad_degree, quad_degree);

  const ElementSpec us = pair_.u();
  u_space_ = build_space(mesh, us.family, us.degree, us.k, SpaceKind::Conforming);
  if (has_sigma()) {
    const ElementSpec ss = pair_.sigma();
    sigma_space_ = build_space(mesh, ss.family, ss.degree, ss.k, SpaceKind::Conforming);
    sigma_trace_ = build_trace_space(mesh, ss.family, ss.degree, ss.k, TraceKind::SingleValued);
  }
  if (has_u_trace())
    u_trace_ = build_trace_space(mesh, us.family, us.degree, us.k, TraceKind::SingleValued);

  const int n = mesh.n;
  const int k = pair_.k;
  for (int cls = 0; cls < mesh.num_classes(); ++cls) {
    ElementMatrices em;
    const SpaceTables& tu = tables_->get(u_spec(), cls);
    const VolumeTable& vu = tu.vol;
    em.volume = vu.w.sum();
    em.mass_u = weighted_gram(vu.val, vu.val, vu.w, ncomp(n, k));
    em.stiff = weighted_gram(vu.dval, vu.dval, vu.w, ncomp(n, k + 1));
    if (k == 0 || k == n)
      em.harmonic = weighted_gram(vu.val, Eigen::MatrixXd::Ones(vu.nq, 1), vu.w, 1).col(0);
    if (has_sigma()) {
      const SpaceTables& ts = tables_->get(sigma_spec(), cls);
      em.mass_sigma = weighted_gram(ts.vol.val, ts.vol.val, ts.vol.w, ncomp(n, k - 1));
      em.mixed = weighted_gram(vu.val, ts.vol.dval, vu.w, ncomp(n, k));
      em.trace_sigma = boundary_trace_matrix(ts, sigma_trace_->boundary_local, n);
      em.gram_sigma = select_columns(em.trace_sigma, sigma_trace_->boundary_local);
    }
    if (has_u_trace()) {
      em.trace_u = boundary_trace_matrix(tu, u_trace_->boundary_local, n);
      em.gram_u = select_columns(em.trace_u, u_trace_->boundary_local);
    }
    class_matrices_.push_back(std::move(em));
  }
}

Eigen::VectorXd Discretization::cell_origin(int cell) const
{
  const auto& c = mesh_->coords[mesh_->cell_vertices(cell)[0]];
  return Eigen::Map<const Eigen::VectorXd>(c.data(), mesh_->n);
}

Eigen::VectorXd Discretization::load(int cell, const SpaceTables& t, const FormFunction& f) const
{
  const int C = ncomp(mesh_->n, t.k);
  const VolumeTable& v = t.vol;
  const Eigen::VectorXd x0 = cell_origin(cell);
  Eigen::VectorXd fq(static_cast<Eigen::Index>(v.nq) * C);
  Eigen::VectorXd x(mesh_->n);
  for (int q = 0; q < v.nq; ++q) {
    x = x0 + v.points.col(q);
    f(x.data(), fq.data() + static_cast<Eigen::Index>(q) * C);
    fq.segment(static_cast<Eigen::Index>(q) * C, C) *= v.w(q);
  }
  return v.val.transpose() * fq;
}

ElementMatrices element_matrices(const Discretization& disc, int cell, const FormFunction* f)
{
  const int cls = disc.mesh().cell_class[cell];
  ElementMatrices em = disc.class_matrices(cls);
  if (f)
    em.load = disc.load(cell, disc.tables().get(disc.u_spec(), cls), *f);
  return em;
}

namespace
{

std::vector<Eigen::VectorXd> cell_loads(const Discretization& disc, const FormFunction& f)
{
  const Mesh& mesh = disc.mesh();
  std::vector<Eigen::VectorXd> loads(mesh.num_cells());
  if (!f) {
    std::fill(loads.begin(), loads.end(), Eigen::VectorXd::Zero(disc.u_local_size()));
    return loads;
  }
  tbb::parallel_for(0, mesh.num_cells(), [&](int c) {
    loads[c] = disc.load(c, disc.tables().get(disc.u_spec(), mesh.cell_class[c]), f);
  });
  return loads;
}

void add_block(std::vector<Eigen::Triplet<double>>& trip, const Eigen::MatrixXd& M, const std::vector<int>& rows,
               const std::vector<int>& cols, double scale = 1.0)
{
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0 && rows[i] <= cols[j])
        trip.emplace_back(rows[i], cols[j], scale * M(i, j));
}

std::vector<int> shifted(std::vector<int> v, int off)
{
  for (int& x : v)
    x += off;
  return v;
}

}  // namespace

StandardSystem assemble_standard(const Discretization& disc, const FormFunction& f)
{
  const Mesh& mesh = disc.mesh();
  StandardSystem sys;
  sys.disc = &disc;
  const int ns = disc.has_sigma() ? disc.sigma_space().dim : 0;
  const int nu = disc.u_space().dim;
  sys.sigma_offset = 0;
  sys.u_offset = ns;
  int size = ns + nu;
  if (disc.global_harmonic())
    sys.p_offset = size++;
  sys.rhs = Eigen::VectorXd::Zero(size);

  const auto loads = cell_loads(disc, f);
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ElementMatrices& em = disc.class_matrices(mesh.cell_class[c]);
    const std::vector<int> ud = shifted(disc.u_space().cell_dofs(c), sys.u_offset);
    // Upper storage: entries with row <= col. sigma ids precede u ids, so D^T lands above the diagonal.
    add_block(trip, em.stiff, ud, ud);
    if (disc.has_sigma()) {
      const std::vector<int> sd = disc.sigma_space().cell_dofs(c);
      add_block(trip, em.mass_sigma, sd, sd, -1.0);
      add_block(trip, em.mixed.transpose(), sd, ud);
    }
    if (disc.global_harmonic())
      for (std::size_t i = 0; i < ud.size(); ++i)
        trip.emplace_back(ud[i], sys.p_offset, em.harmonic(static_cast<Eigen::Index>(i)));
    for (std::size_t i = 0; i < ud.size(); ++i)
      sys.rhs(ud[i]) += loads[c](static_cast<Eigen::Index>(i));
  }
  // Natural boundary conditions with k = n leave no null space; the stiffness block is zero there,
  // so keep the diagonal structurally present for the ordering.
  for (int i = 0; i < size; ++i)
    trip.emplace_back(i, i, 0.0);
  sys.matrix = SparseSym::from_upper_triplets(size, trip);
  return sys;
}

HybridSystem assemble_hybrid(const Discretization& disc, const FormFunction& f)
{
  const Mesh& mesh = disc.mesh();
  const int n = mesh.n;
  const int k = disc.k();
  HybridSystem sys;
  sys.disc = &disc;
  HybridLayout& L = sys.layout;
  L.sigma = disc.sigma_local_size();
  L.u = disc.u_local_size();
  L.pbar = k == n ? 1 : 0;
  L.uhat_nor = disc.sigma_boundary_size();
  L.rhohat_nor = disc.u_boundary_size();
  L.off_sigma = 0;
  L.off_u = L.sigma;
  L.off_pbar = L.off_u + L.u;
  L.off_uhat_nor = L.off_pbar + L.pbar;
  L.off_rhohat_nor = L.off_uhat_nor + L.uhat_nor;
  L.local_size = L.off_rhohat_nor + L.rhohat_nor;
  L.p = k == 0 ? 1 : 0;
  L.ubar = k == n ? mesh.num_cells() : 0;
  L.sigmahat = disc.has_sigma() ? disc.sigma_trace().dim : 0;
  L.uhat = disc.has_u_trace() ? disc.u_trace().dim : 0;
  L.off_p = 0;
  L.off_ubar = L.p;
  L.off_sigmahat = L.off_ubar + L.ubar;
  L.off_uhat = L.off_sigmahat + L.sigmahat;
  L.global_size = L.off_uhat + L.uhat;

  const int nrows_b = L.p + L.pbar + L.uhat_nor + L.rhohat_nor;
  for (int cls = 0; cls < mesh.num_classes(); ++cls) {
    const ElementMatrices& em = disc.class_matrices(cls);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L.local_size, L.local_size);
    A.block(L.off_u, L.off_u, L.u, L.u) = em.stiff;
    if (L.sigma) {
      A.block(L.off_sigma, L.off_sigma, L.sigma, L.sigma) = -em.mass_sigma;
      A.block(L.off_u, L.off_sigma, L.u, L.sigma) = em.mixed;
      A.block(L.off_sigma, L.off_u, L.sigma, L.u) = em.mixed.transpose();
      A.block(L.off_uhat_nor, L.off_sigma, L.uhat_nor, L.sigma) = -em.trace_sigma;
      A.block(L.off_sigma, L.off_uhat_nor, L.sigma, L.uhat_nor) = -em.trace_sigma.transpose();
    }
    if (L.pbar) {
      A.block(L.off_u, L.off_pbar, L.u, 1) = em.harmonic;
      A.block(L.off_pbar, L.off_u, 1, L.u) = em.harmonic.transpose();
    }
    if (L.rhohat_nor) {
      A.block(L.off_rhohat_nor, L.off_u, L.rhohat_nor, L.u) = -em.trace_u;
      A.block(L.off_u, L.off_rhohat_nor, L.u, L.rhohat_nor) = -em.trace_u.transpose();
    }
    sys.A.push_back(std::move(A));

    // B rows: [p | ubar | sigmahat boundary DOFs | uhat boundary DOFs]
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nrows_b, L.local_size);
    int row = 0;
    if (L.p) {
      B.block(row, L.off_u, 1, L.u) = em.harmonic.transpose();
      ++row;
    }
    if (L.pbar) {
      B(row, L.off_pbar) = -em.volume;
      ++row;
    }
    if (L.uhat_nor) {
      B.block(row, L.off_uhat_nor, L.uhat_nor, L.uhat_nor) = em.gram_sigma;
      row += L.uhat_nor;
    }
    if (L.rhohat_nor)
      B.block(row, L.off_rhohat_nor, L.rhohat_nor, L.rhohat_nor) = em.gram_u;
    sys.B.push_back(std::move(B));
  }

  const auto loads = cell_loads(disc, f);
  sys.F.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    sys.F[c] = Eigen::VectorXd::Zero(L.local_size);
    sys.F[c].segment(L.off_u, L.u) = loads[c];
  }
  sys.G = Eigen::VectorXd::Zero(L.global_size);
  return sys;
}

const Eigen::MatrixXd& HybridSystem::A_block(int cell) const
{
  return A[disc->mesh().cell_class[cell]];
}

const Eigen::MatrixXd& HybridSystem::B_block(int cell) const
{
  return B[disc->mesh().cell_class[cell]];
}

std::vector<int> HybridSystem::cell_globals(int cell) const
{
  std::vector<int> g;
  const HybridLayout& L = layout;
  if (L.p)
    g.push_back(L.off_p);
  if (L.ubar)
    g.push_back(L.off_ubar + cell);
  if (L.sigmahat)
    for (int id : disc->sigma_trace().cell_dofs(cell))
      g.push_back(L.off_sigmahat + id);
  if (L.uhat)
    for (int id : disc->u_trace().cell_dofs(cell))
      g.push_back(L.off_uhat + id);
  return g;
}

SparseSym HybridSystem::full_matrix() const
{
  const int nl = layout.local_size;
  const int base = num_cells() * nl;
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < num_cells(); ++c) {
    std::vector<int> loc(nl);
    for (int i = 0; i < nl; ++i)
      loc[i] = c * nl + i;
    add_block(trip, A_block(c), loc, loc);
    const std::vector<int> g = shifted(cell_globals(c), base);
    add_block(trip, B_block(c).transpose(), loc, g);
  }
  for (int i = 0; i < full_size(); ++i)
    trip.emplace_back(i, i, 0.0);
  return SparseSym::from_upper_triplets(full_size(), trip);
}

Eigen::VectorXd HybridSystem::full_rhs() const
{
  Eigen::VectorXd b(full_size());
  const int nl = layout.local_size;
  for (int c = 0; c < num_cells(); ++c)
    b.segment(static_cast<Eigen::Index>(c) * nl, nl) = F[c];
  b.tail(layout.global_size) = G;
  return b;
}

DiscreteSolution unpack_standard(const StandardSystem& sys, const Eigen::VectorXd& x)
{
  const Discretization& disc = *sys.disc;
  const Mesh& mesh = disc.mesh();
  const int nc = mesh.num_cells();
  DiscreteSolution s;
  s.sigma.resize(nc);
  s.u.resize(nc);
  if (disc.has_sigma())
    s.sigmahat = Eigen::VectorXd::Zero(disc.sigma_trace().dim);
  if (disc.has_u_trace())
    s.uhat = Eigen::VectorXd::Zero(disc.u_trace().dim);
  if (disc.local_harmonic())
    s.ubar = Eigen::VectorXd::Zero(nc);
  for (int c = 0; c < nc; ++c) {
    const std::vector<int> ud = disc.u_space().cell_dofs(c);
    s.u[c].resize(static_cast<Eigen::Index>(ud.size()));
    for (std::size_t i = 0; i < ud.size(); ++i)
      s.u[c](static_cast<Eigen::Index>(i)) = x(sys.u_offset + ud[i]);
    if (disc.has_sigma()) {
      const std::vector<int> sd = disc.sigma_space().cell_dofs(c);
      s.sigma[c].resize(static_cast<Eigen::Index>(sd.size()));
      for (std::size_t i = 0; i < sd.size(); ++i)
        s.sigma[c](static_cast<Eigen::Index>(i)) = x(sys.sigma_offset + sd[i]);
      const TraceSpace& ts = disc.sigma_trace();
      for (int j = 0; j < ts.boundary_size(); ++j)
        s.sigmahat(ts.global_dof(c, j)) = s.sigma[c](ts.boundary_local[j]);
    } else {
      s.sigma[c].resize(0);
    }
    if (disc.has_u_trace()) {
      const TraceSpace& tt = disc.u_trace();
      for (int j = 0; j < tt.boundary_size(); ++j)
        s.uhat(tt.global_dof(c, j)) = s.u[c](tt.boundary_local[j]);
    }
    if (disc.local_harmonic()) {
      const ElementMatrices& em = disc.class_matrices(mesh.cell_class[c]);
      s.ubar(c) = em.harmonic.dot(s.u[c]) / em.volume;
    }
  }
  if (sys.p_offset >= 0)
    s.p = x(sys.p_offset);
  return s;
}

DiscreteSolution unpack_hybrid(const HybridSystem& sys, const std::vector<Eigen::VectorXd>& locals,
                               const Eigen::VectorXd& y)
{
  const HybridLayout& L = sys.layout;
  const int nc = sys.num_cells();
  DiscreteSolution s;
  s.hybrid = true;
  s.sigma.resize(nc);
  s.u.resize(nc);
  s.uhat_nor.resize(nc);
  s.rhohat_nor.resize(nc);
  s.pbar.assign(nc, 0.0);
  for (int c = 0; c < nc; ++c) {
    const Eigen::VectorXd& x = locals[c];
    s.sigma[c] = x.segment(L.off_sigma, L.sigma);
    s.u[c] = x.segment(L.off_u, L.u);
    if (L.pbar)
      s.pbar[c] = x(L.off_pbar);
    s.uhat_nor[c] = x.segment(L.off_uhat_nor, L.uhat_nor);
    s.rhohat_nor[c] = x.segment(L.off_rhohat_nor, L.rhohat_nor);
  }
  if (L.p)
    s.p = y(L.off_p);
  s.ubar = y.segment(L.off_ubar, L.ubar);
  s.sigmahat = y.segment(L.off_sigmahat, L.sigmahat);
  s.uhat = y.segment(L.off_uhat, L.uhat);
  return s;
}

DiscreteSolution unpack_hybrid(const HybridSystem& sys, const Eigen::VectorXd& xy)
{
  const int nl = sys.layout.local_size;
  std::vector<Eigen::VectorXd> locals(sys.num_cells());
  for (int c = 0; c < sys.num_cells(); ++c)
    locals[c] = xy.segment(static_cast<Eigen::Index>(c) * nl, nl);
  return unpack_hybrid(sys, locals, xy.tail(sys.layout.global_size));
}

}  // namespace feec
