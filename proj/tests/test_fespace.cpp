// Finite element spaces: dimensions, single-valued traces of conforming spaces, trace-space numbering,
// the subcomplex property of stable pairs and discrete Hodge decompositions.

#include "feec/assembly.hpp"
#include "feec/fespace.hpp"
#include "feec/geometry.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <map>

using feec::Family;
using feec::SpaceKind;
using feec::StablePair;

namespace
{

/// Tangential trace of a physical basis function at an absolute point, evaluated on the k-subsets of
/// the facet edge vectors (frame independent, so both sides of a facet can be compared directly).
Eigen::VectorXd edge_trace(const feec::Mesh& m, int cell, const feec::PolyForm<double>& phi, const Eigen::VectorXd& x,
                           const Eigen::MatrixXd& edges)
{
  const int n = m.n;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i)
    y[i] = x[i] - m.coords[m.cell_vertices(cell)[0]][i];
  Eigen::VectorXd a(phi.ncomp());
  phi.evaluate(y.data(), a.data());
  return feec::compound(edges, phi.k()).transpose() * a;
}

long long expected_conforming_dim(const feec::Mesh& m, const feec::ReferenceElement& ref)
{
  long long dim = 0;
  for (int d = 0; d <= m.n; ++d)
    dim += static_cast<long long>(m.num_entities(d)) * ref.moments[d];
  return dim;
}

/// Global mass matrix of the u space and global matrix of (d tau_j, v_i) of a discretization.
void assemble_conforming(const feec::Discretization& disc, Eigen::MatrixXd& mass, Eigen::MatrixXd& mixed,
                         Eigen::MatrixXd* stiff = nullptr)
{
  const auto& U = disc.u_space();
  mass = Eigen::MatrixXd::Zero(U.dim, U.dim);
  if (stiff)
    *stiff = Eigen::MatrixXd::Zero(U.dim, U.dim);
  mixed = Eigen::MatrixXd::Zero(U.dim, disc.has_sigma() ? disc.sigma_space().dim : 0);
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    const auto& em = disc.class_matrices(disc.mesh().cell_class[c]);
    const auto ud = U.cell_dofs(c);
    for (std::size_t i = 0; i < ud.size(); ++i)
      for (std::size_t j = 0; j < ud.size(); ++j) {
        mass(ud[i], ud[j]) += em.mass_u(i, j);
        if (stiff)
          (*stiff)(ud[i], ud[j]) += em.stiff(i, j);
      }
    if (disc.has_sigma()) {
      const auto sd = disc.sigma_space().cell_dofs(c);
      for (std::size_t i = 0; i < ud.size(); ++i)
        for (std::size_t j = 0; j < sd.size(); ++j)
          mixed(ud[i], sd[j]) += em.mixed(i, j);
    }
  }
}

}  // namespace

TEST_CASE("broken and conforming dimensions")
{
  for (int n : {2, 3}) {
    const feec::Mesh m = feec::build_structured_mesh(n, 2);
    for (int k = 0; k <= n; ++k)
      for (int deg = 1; deg <= 2; ++deg)
        for (Family f : {Family::Trimmed, Family::Full}) {
          const auto broken = feec::build_space(m, f, deg, k, SpaceKind::Broken);
          const auto conf = feec::build_space(m, f, deg, k, SpaceKind::Conforming);
          CHECK(broken.dim == m.num_cells() * broken.local_size());
          CHECK(conf.dim == expected_conforming_dim(m, *conf.ref));
          CHECK(conf.dim <= broken.dim);
        }
    // Lagrange P_2 on an N x N grid has (2N + 1)^n nodes
    const auto p2 = feec::build_space(m, Family::Full, 2, 0, SpaceKind::Conforming);
    CHECK(p2.dim == (n == 2 ? 25 : 125));
  }
  const feec::Mesh m = feec::build_structured_mesh(2, 1);
  CHECK_THROWS_AS(feec::build_space(m, Family::Trimmed, 0, 1, SpaceKind::Broken), feec::ConfigError);
}

TEST_CASE("conforming basis functions have single-valued tangential traces")
{
  for (int n : {2, 3}) {
    const feec::Mesh m = feec::build_structured_mesh(n, 2);
    for (int k = 0; k < n; ++k)
      for (Family f : {Family::Trimmed, Family::Full}) {
        const int deg = 2;
        const feec::ElementTables tables(m, 6, 6);
        const auto space = feec::build_space(m, f, deg, k, SpaceKind::Conforming);
        const feec::SpaceSpec spec{f, deg, k, false};
        double worst = 0.0;
        for (const auto& sf : feec::skeleton(m)) {
          if (sf.boundary)
            continue;
          const auto& fv = m.entities[n - 1][sf.facet];
          Eigen::MatrixXd edges(n, n - 1);
          for (int j = 0; j < n - 1; ++j)
            for (int i = 0; i < n; ++i)
              edges(i, j) = m.coords[fv[j + 1]][i] - m.coords[fv[0]][i];
          const int c0 = sf.incidences[0].cell, c1 = sf.incidences[1].cell;
          const auto& t0 = tables.get(spec, m.cell_class[c0]);
          const auto& t1 = tables.get(spec, m.cell_class[c1]);
          std::map<int, std::pair<int, int>> local;  // global -> (local in c0, local in c1)
          const auto d0 = space.cell_dofs(c0), d1 = space.cell_dofs(c1);
          for (std::size_t i = 0; i < d0.size(); ++i)
            local[d0[i]].first = static_cast<int>(i) + 1;
          for (std::size_t i = 0; i < d1.size(); ++i)
            local[d1[i]].second = static_cast<int>(i) + 1;
          const auto& pts = t0.facets[sf.incidences[0].local_facet].points;
          for (int q = 0; q < pts.cols(); ++q) {
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i)
              x[i] = pts(i, q) + m.coords[m.cell_vertices(c0)[0]][i];
            for (const auto& [g, ij] : local) {
              const int dimk = static_cast<int>(feec::binomial(n - 1, k));
              Eigen::VectorXd a = Eigen::VectorXd::Zero(dimk), b = Eigen::VectorXd::Zero(dimk);
              if (ij.first)
                a = edge_trace(m, c0, t0.physical[ij.first - 1], x, edges);
              if (ij.second)
                b = edge_trace(m, c1, t1.physical[ij.second - 1], x, edges);
              worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
            }
          }
        }
        INFO("n=" << n << " k=" << k << " family=" << feec::to_string(f));
        CHECK(worst <= 1e-12);
      }
  }
}

TEST_CASE("single-valued trace spaces share facet DOFs between neighbours")
{
  for (int n : {2, 3}) {
    const feec::Mesh m = feec::build_structured_mesh(n, 2);
    for (int k = 0; k < n; ++k) {
      const auto tr = feec::build_trace_space(m, Family::Trimmed, 2, k, feec::TraceKind::SingleValued);
      const auto broken = feec::build_trace_space(m, Family::Trimmed, 2, k, feec::TraceKind::Broken);
      CHECK(broken.dim == m.num_cells() * broken.boundary_size());
      long long expected = 0;
      for (int d = 0; d < n; ++d)
        expected += static_cast<long long>(m.num_entities(d)) * tr.ref->moments[d];
      CHECK(tr.dim == expected);
      CHECK(tr.facet_ref->size() == static_cast<int>(tr.facet_dofs(0).size()));
      for (int f = 0; f < m.num_facets(); ++f) {
        const auto fd = tr.facet_dofs(f);
        for (const auto& inc : m.facet_cells[f]) {
          const auto cd = tr.cell_dofs(inc.cell);
          const auto pos = tr.facet_local(inc.local_facet);
          REQUIRE(pos.size() == fd.size());
          for (std::size_t j = 0; j < pos.size(); ++j)
            CHECK(cd[pos[j]] == fd[j]);
        }
      }
    }
    CHECK_THROWS_AS(feec::build_trace_space(m, Family::Trimmed, 1, n, feec::TraceKind::SingleValued),
                    feec::ConfigError);
  }
}

TEST_CASE("stable pairs validate their families")
{
  CHECK_NOTHROW((StablePair{2, 1, 0, Family::Trimmed, Family::Trimmed}.validate()));
  CHECK_NOTHROW((StablePair{3, 2, 1, Family::Full, Family::Full}.validate()));
  CHECK_THROWS_AS((StablePair{2, 1, 0, Family::Trimmed, Family::Full}.validate()), feec::ConfigError);
  CHECK_THROWS_AS((StablePair{2, 3, 0, Family::Trimmed, Family::Trimmed}.validate()), feec::ConfigError);
  const StablePair p{3, 2, 1, Family::Full, Family::Trimmed};
  CHECK(p.sigma() == feec::ElementSpec{Family::Full, 2, 1});
  CHECK(p.u() == feec::ElementSpec{Family::Trimmed, 2, 2});
}

TEST_CASE("d maps the conforming sigma space into the conforming u space")
{
  // ||d tau||^2 equals the squared norm of its u-projection exactly when d tau lies in V^k
  for (int n : {2, 3})
    for (int k = 1; k <= n; ++k)
      for (int r : {0, 1}) {
        const feec::Mesh m = feec::build_structured_mesh(n, n == 2 ? 2 : 1);
        const StablePair pair{n, k, r, Family::Trimmed, Family::Trimmed};
        const feec::Discretization disc(m, pair);
        // u space of the (k-1) pair is the sigma space of this one
        const feec::Discretization dsig(m, StablePair{n, k - 1, r, Family::Trimmed, Family::Trimmed});
        Eigen::MatrixXd mass, mixed, mp, xp, stiff;
        assemble_conforming(disc, mass, mixed);
        assemble_conforming(dsig, mp, xp, &stiff);
        REQUIRE(stiff.rows() == mixed.cols());
        const Eigen::MatrixXd proj = mixed.transpose() * mass.ldlt().solve(mixed);
        CHECK((stiff - proj).norm() <= 1e-10 * std::max(1.0, stiff.norm()));
      }
}

TEST_CASE("Hodge decomposition of the global lowest-order complex in 2D")
{
  // V^0 = P_1, V^1 = P^-_1 Lambda^1, V^2 = P_0 on the unit square: no harmonic 1-forms
  const feec::Mesh m = feec::build_structured_mesh(2, 3);
  const feec::Discretization d1(m, StablePair{2, 1, 0, Family::Trimmed, Family::Trimmed});
  const feec::Discretization d2(m, StablePair{2, 2, 0, Family::Trimmed, Family::Trimmed});
  Eigen::MatrixXd M1, B1, M2, B2;
  assemble_conforming(d1, M1, B1);
  assemble_conforming(d2, M2, B2);
  const Eigen::MatrixXd D0 = M1.ldlt().solve(B1);  // coefficients of d of each P_1 function in V^1
  const Eigen::MatrixXd D1 = M2.ldlt().solve(B2);  // d: V^1 -> V^2
  REQUIRE(D1.cols() == M1.rows());
  CHECK((D1 * D0).norm() <= 1e-10);
  const auto h = feec::hodge_decompose(M1, D0, D1);
  const int v0 = d1.sigma_space().dim, v1 = d1.u_space().dim, v2 = d2.u_space().dim;
  CHECK(h.exact.cols() == v0 - 1);
  CHECK(h.harmonic.cols() == 0);
  CHECK(h.coexact.cols() == v2);
  CHECK(h.exact.cols() + h.harmonic.cols() + h.coexact.cols() == v1);
  CHECK((h.exact.transpose() * M1 * h.coexact).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((D1 * h.exact).norm() <= 1e-10);
}

TEST_CASE("Hodge decomposition: V^0 has the constants as harmonic forms")
{
  const feec::Mesh m = feec::build_structured_mesh(2, 2);
  const feec::Discretization d1(m, StablePair{2, 1, 1, Family::Trimmed, Family::Trimmed});
  const feec::Discretization d0(m, StablePair{2, 0, 1, Family::Trimmed, Family::Trimmed});
  Eigen::MatrixXd M0, B0, M1, B1;
  assemble_conforming(d0, M0, B0);
  assemble_conforming(d1, M1, B1);
  REQUIRE(d0.u_space().dim == d1.sigma_space().dim);
  const Eigen::MatrixXd D0 = M1.ldlt().solve(B1);
  const auto h = feec::hodge_decompose(M0, Eigen::MatrixXd(M0.rows(), 0), D0);
  REQUIRE(h.harmonic.cols() == 1);
  const Eigen::VectorXd c = h.harmonic.col(0) / h.harmonic.col(0)[0];
  CHECK((c - Eigen::VectorXd::Ones(c.size())).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(h.exact.cols() == 0);
  CHECK(h.coexact.cols() == M0.rows() - 1);
}

TEST_CASE("local harmonic n-forms with vanishing boundary traces are the constants")
{
  for (int n : {2, 3})
    for (int r : {0, 1, 2}) {
      const feec::Mesh m = feec::build_structured_mesh(n, 1);
      const feec::Discretization disc(m, StablePair{n, n, r, Family::Trimmed, Family::Trimmed});
      const auto& em = disc.class_matrices(0);
      const Eigen::MatrixXd D = em.mass_u.ldlt().solve(em.mixed);
      const auto interior = disc.sigma_space().ref->interior_dofs();
      Eigen::MatrixXd Dint(D.rows(), static_cast<Eigen::Index>(interior.size()));
      for (std::size_t j = 0; j < interior.size(); ++j)
        Dint.col(static_cast<Eigen::Index>(j)) = D.col(interior[j]);
      const auto h = feec::hodge_decompose(em.mass_u, Dint, Eigen::MatrixXd(0, D.rows()));
      INFO("n=" << n << " r=" << r);
      REQUIRE(h.harmonic.cols() == 1);
      // the harmonic form is the constant q: its mass-weighted coefficients are parallel to (v_i, q)
      const Eigen::VectorXd g = em.mass_u * h.harmonic.col(0);
      const double cosine = std::abs(g.dot(em.harmonic)) / (g.norm() * em.harmonic.norm());
      CHECK(cosine == doctest::Approx(1.0).epsilon(1e-10));
    }
}
