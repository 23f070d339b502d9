#include "feec/mesh.hpp"

#include "feec/combinatorics.hpp"
#include "feec/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>

namespace feec
{

namespace
{

std::uint64_t pack(const std::array<int, 4>& v, int count)
{
  std::uint64_t key = static_cast<std::uint64_t>(count);
  for (int i = 0; i < count; ++i)
    key |= static_cast<std::uint64_t>(v[i] + 1) << (16 * i + 2);
  return key;
}

Eigen::MatrixXd cell_points(const Mesh& m, int c)
{
  Eigen::MatrixXd P(m.n, m.n + 1);
  for (int j = 0; j <= m.n; ++j)
    for (int i = 0; i < m.n; ++i)
      P(i, j) = m.coords[m.cell_vertices(c)[j]][i];
  return P;
}

}  // namespace

int Mesh::facet_of(int cell, int local_facet) const
{
  return cell_entity[cell][full_mask(n + 1) & ~(1u << local_facet)];
}

double Mesh::cell_volume(int c) const
{
  Eigen::MatrixXd P = cell_points(*this, c);
  Eigen::MatrixXd J(n, n);
  for (int j = 0; j < n; ++j)
    J.col(j) = P.col(j + 1) - P.col(0);
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return std::abs(J.determinant()) / f;
}

double Mesh::inradius(int c) const
{
  // r = n |K| / sum of facet measures
  Eigen::MatrixXd P = cell_points(*this, c);
  double area = 0.0;
  for (int f = 0; f <= n; ++f) {
    std::vector<int> idx;
    for (int j = 0; j <= n; ++j)
      if (j != f)
        idx.push_back(j);
    Eigen::MatrixXd E(n, n - 1);
    for (int j = 1; j < n; ++j)
      E.col(j - 1) = P.col(idx[j]) - P.col(idx[0]);
    double fac = 1.0;
    for (int i = 2; i <= n - 1; ++i)
      fac *= i;
    area += std::sqrt((E.transpose() * E).determinant()) / fac;
  }
  return n * cell_volume(c) / area;
}

std::vector<double> Mesh::outward_normal(int cell, int local_facet) const
{
  Eigen::MatrixXd P = cell_points(*this, cell);
  std::vector<int> idx;
  for (int j = 0; j <= n; ++j)
    if (j != local_facet)
      idx.push_back(j);
  Eigen::MatrixXd E(n, n - 1);
  for (int j = 1; j < n; ++j)
    E.col(j - 1) = P.col(idx[j]) - P.col(idx[0]);
  // normal = null vector of E^T
  Eigen::FullPivLU<Eigen::MatrixXd> lu(E.transpose());
  Eigen::VectorXd nv = lu.kernel().col(0);
  nv.normalize();
  Eigen::VectorXd to_opposite = P.col(local_facet) - P.col(idx[0]);
  if (nv.dot(to_opposite) > 0)
    nv = -nv;
  return std::vector<double>(nv.data(), nv.data() + n);
}

Mesh build_structured_mesh(int n, int N, MeshOptions options)
{
  if (n != 2 && n != 3)
    throw ConfigError("build_structured_mesh: n must be 2 or 3");
  if (N < 1)
    throw ConfigError("build_structured_mesh: N must be positive");
  if (N > 4000)
    throw ConfigError("build_structured_mesh: N too large");

  Mesh m;
  m.n = n;
  m.N = N;
  const int np = N + 1;
  auto vid = [&](int i, int j, int k) { return (k * np + j) * np + i; };
  const int nk = n == 3 ? np : 1;
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) {
        m.lattice.push_back({i, j, k});
        m.coords.push_back({static_cast<double>(i) / N, static_cast<double>(j) / N,
                            n == 3 ? static_cast<double>(k) / N : 0.0});
      }

  std::vector<std::array<int, 4>> cells;
  if (n == 2) {
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const int a = vid(i, j, 0), b = vid(i + 1, j, 0), c = vid(i + 1, j + 1, 0), d = vid(i, j + 1, 0);
        if (options.diagonal == Diagonal::MainDiagonal) {
          cells.push_back({a, b, c, 0});
          cells.push_back({a, c, d, 0});
        } else {
          cells.push_back({a, b, d, 0});
          cells.push_back({b, c, d, 0});
        }
      }
  } else {
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
          for (const auto& p : perms) {
            std::array<int, 3> x{i, j, k};
            std::array<int, 4> cell{};
            cell[0] = vid(x[0], x[1], x[2]);
            for (int s = 0; s < 3; ++s) {
              ++x[p[s]];
              cell[s + 1] = vid(x[0], x[1], x[2]);
            }
            cells.push_back(cell);
          }
  }
  for (auto& c : cells)
    std::sort(c.begin(), c.begin() + n + 1);

  // Sub-simplex enumeration.
  std::vector<std::unordered_map<std::uint64_t, int>> lookup(n + 1);
  m.cell_entity.assign(cells.size(), std::vector<int>(1u << (n + 1), -1));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (unsigned mask = 1; mask < (1u << (n + 1)); ++mask) {
      const int d = popcount(mask) - 1;
      std::array<int, 4> verts{};
      int cnt = 0;
      for (int v : mask_indices(mask))
        verts[cnt++] = cells[c][v];
      const std::uint64_t key = pack(verts, cnt);
      auto [it, inserted] = lookup[d].try_emplace(key, static_cast<int>(m.entities[d].size()));
      if (inserted)
        m.entities[d].push_back(verts);
      m.cell_entity[c][mask] = it->second;
    }
  }
  // Vertex entities must coincide with the vertex numbering.
  {
    std::vector<std::array<int, 4>> verts(m.lattice.size());
    for (std::size_t v = 0; v < verts.size(); ++v)
      verts[v] = {static_cast<int>(v), 0, 0, 0};
    std::vector<int> remap(m.entities[0].size());
    for (std::size_t e = 0; e < m.entities[0].size(); ++e)
      remap[e] = m.entities[0][e][0];
    for (auto& ce : m.cell_entity)
      for (unsigned mask = 1; mask < ce.size(); ++mask)
        if (popcount(mask) == 1)
          ce[mask] = remap[ce[mask]];
    m.entities[0] = verts;
  }

  m.facet_cells.assign(m.entities[n - 1].size(), {});
  for (int c = 0; c < static_cast<int>(cells.size()); ++c)
    for (int f = 0; f <= n; ++f)
      m.facet_cells[m.facet_of(c, f)].push_back({c, f});
  m.facet_boundary.resize(m.facet_cells.size());
  for (std::size_t f = 0; f < m.facet_cells.size(); ++f)
    m.facet_boundary[f] = m.facet_cells[f].size() == 1;

  // Diameters and geometry classes.
  std::map<std::array<int, 9>, int> classes;
  m.h.resize(cells.size());
  m.cell_class.resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double hk = 0.0;
    for (int a = 0; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          const double dx = m.coords[cells[c][a]][i] - m.coords[cells[c][b]][i];
          s += dx * dx;
        }
        hk = std::max(hk, std::sqrt(s));
      }
    m.h[c] = hk;
    m.hmax = std::max(m.hmax, hk);
    std::array<int, 9> J{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        J[i * n + j] = m.lattice[cells[c][j + 1]][i] - m.lattice[cells[c][0]][i];
    auto [it, inserted] = classes.try_emplace(J, static_cast<int>(m.class_jacobian.size()));
    if (inserted)
      m.class_jacobian.push_back(J);
    m.cell_class[c] = it->second;
  }
  return m;
}

std::vector<SkeletonFacet> skeleton(const Mesh& mesh)
{
  std::vector<SkeletonFacet> out(mesh.num_facets());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    out[f].facet = f;
    out[f].boundary = mesh.facet_boundary[f] != 0;
    for (const auto& inc : mesh.facet_cells[f])
      out[f].incidences.push_back({inc.cell, inc.local_facet, mesh.outward_normal(inc.cell, inc.local_facet)});
  }
  return out;
}

void dump_mesh(std::ostream& os, const Mesh& mesh)
{
  os << "# n " << mesh.n << " N " << mesh.N << "\n";
  for (int d = 0; d <= mesh.n; ++d) {
    os << "# entities of dimension " << d << ": " << mesh.num_entities(d) << "\n";
    for (int e = 0; e < mesh.num_entities(d); ++e) {
      os << e;
      for (int i = 0; i <= d; ++i)
        os << ' ' << mesh.entities[d][e][i];
      os << "\n";
    }
  }
}

}  // namespace feec
