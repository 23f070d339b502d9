#include "feec/fespace.hpp"

#include "feec/errors.hpp"

#include <fmt/format.h>

namespace feec
{

std::string to_string(const ElementSpec& e)
{
  return fmt::format("{}(degree {}, k {})", e.family == Family::Full ? "P" : "P-", e.degree, e.k);
}

void StablePair::validate() const
{
  if (n < 2 || n > 3)
    throw ConfigError(fmt::format("stable pair: n = {} is not supported (2 or 3)", n));
  if (k < 0 || k > n)
    throw ConfigError(fmt::format("stable pair: k = {} is outside 0..{}", k, n));
  if (r < 0)
    throw ConfigError("stable pair: r must be nonnegative");
  if (u_family == Family::Full && r < 1)
    throw ConfigError("stable pair: P_r Lambda^k for u requires r >= 1");
  if (r + 2 > max_basis_degree)
    throw ConfigError(fmt::format("stable pair: r = {} exceeds the supported degree range", r));
}

namespace
{

void check_element(Family family, int degree, int k, int n)
{
  if (k < 0 || k > n)
    throw ConfigError(fmt::format("form degree {} outside 0..{}", k, n));
  if (family == Family::Trimmed && degree < 1)
    throw ConfigError("trimmed spaces need degree >= 1");
  if (degree < 0 || degree > max_basis_degree)
    throw ConfigError(fmt::format("polynomial degree {} is not supported", degree));
}

std::array<int, max_ambient_dim + 2> entity_offsets(const Mesh& mesh, const ReferenceElement& ref, int top)
{
  std::array<int, max_ambient_dim + 2> off{};
  int acc = 0;
  for (int d = 0; d <= top; ++d) {
    off[d] = acc;
    acc += mesh.num_entities(d) * ref.moments[d];
  }
  off[top + 1] = acc;
  return off;
}

}  // namespace

int FeSpace::global_dof(int cell, int local) const
{
  if (kind == SpaceKind::Broken)
    return cell * ref->size() + local;
  const DofLabel& l = ref->dofs[local];
  const int d = l.subdim();
  return offsets[d] + mesh->cell_entity[cell][l.vertex_mask] * ref->moments[d] + l.moment;
}

std::vector<int> FeSpace::cell_dofs(int cell) const
{
  std::vector<int> out(ref->size());
  for (int i = 0; i < ref->size(); ++i)
    out[i] = global_dof(cell, i);
  return out;
}

FeSpace build_space(const Mesh& mesh, Family family, int degree, int k, SpaceKind kind)
{
  check_element(family, degree, k, mesh.n);
  FeSpace s;
  s.mesh = &mesh;
  s.spec = {family, degree, k};
  s.kind = kind;
  s.ref = &reference_element(family, degree, k, mesh.n);
  if (kind == SpaceKind::Broken) {
    s.dim = mesh.num_cells() * s.ref->size();
  } else {
    s.offsets = entity_offsets(mesh, *s.ref, mesh.n);
    s.dim = s.offsets[mesh.n + 1];
  }
  return s;
}

int TraceSpace::global_dof(int cell, int j) const
{
  if (kind == TraceKind::Broken)
    return cell * boundary_size() + j;
  const DofLabel& l = ref->dofs[boundary_local[j]];
  const int d = l.subdim();
  return offsets_[d] + mesh->cell_entity[cell][l.vertex_mask] * ref->moments[d] + l.moment;
}

std::vector<int> TraceSpace::cell_dofs(int cell) const
{
  std::vector<int> out(boundary_size());
  for (int j = 0; j < boundary_size(); ++j)
    out[j] = global_dof(cell, j);
  return out;
}

std::vector<int> TraceSpace::facet_local(int local_facet) const
{
  const int n = ref->dim;
  std::vector<int> out;
  out.reserve(facet_ref->size());
  for (const DofLabel& fl : facet_ref->dofs) {
    unsigned cell_mask = 0;
    for (int j : mask_indices(fl.vertex_mask))
      cell_mask |= 1u << (j < local_facet ? j : j + 1);
    int found = -1;
    for (int b = 0; b < boundary_size(); ++b) {
      const DofLabel& l = ref->dofs[boundary_local[b]];
      if (l.vertex_mask == cell_mask && l.moment == fl.moment) {
        found = b;
        break;
      }
    }
    if (found < 0)
      throw Error(fmt::format("trace space: no volume DOF matches facet DOF (facet {}, n {})", local_facet, n));
    out.push_back(found);
  }
  return out;
}

std::vector<int> TraceSpace::facet_dofs(int facet) const
{
  if (kind != TraceKind::SingleValued)
    throw ConfigError("facet_dofs is defined for single-valued trace spaces only");
  const Incidence& inc = mesh->facet_cells[facet].front();
  std::vector<int> out;
  for (int b : facet_local(inc.local_facet))
    out.push_back(global_dof(inc.cell, b));
  return out;
}

TraceSpace build_trace_space(const Mesh& mesh, Family family, int degree, int k, TraceKind kind)
{
  const int n = mesh.n;
  if (k == n)
    throw ConfigError("trace spaces of n-forms are trivial; k must be at most n-1");
  check_element(family, degree, k, n);
  TraceSpace t;
  t.mesh = &mesh;
  t.spec = {family, degree, k};
  t.kind = kind;
  t.ref = &reference_element(family, degree, k, n);
  t.facet_ref = &reference_element(family, degree, k, n - 1);
  for (int i = 0; i < t.ref->size(); ++i)
    if (t.ref->dofs[i].subdim() < n)
      t.boundary_local.push_back(i);
  if (kind == TraceKind::Broken) {
    t.dim = mesh.num_cells() * t.boundary_size();
  } else {
    t.offsets_ = entity_offsets(mesh, *t.ref, n - 1);
    t.dim = t.offsets_[n];
  }
  return t;
}

namespace
{

/// Orthonormal basis of the column range of A (Euclidean). Singular values below tol * scale count
/// as zero; a negative scale means the largest singular value.
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& A, double tol, double scale = -1.0)
{
  if (A.cols() == 0 || A.rows() == 0)
    return Eigen::MatrixXd(A.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  const double ref = scale < 0 ? (s.size() ? s(0) : 0.0) : scale;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * ref)
      ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Orthonormal basis of the kernel of A.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& A, int ncols, double tol)
{
  if (A.rows() == 0)
    return Eigen::MatrixXd::Identity(ncols, ncols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * smax)
      ++rank;
  return svd.matrixV().rightCols(ncols - rank);
}

/// Orthonormal basis of the orthogonal complement of the columns of Q (Q orthonormal) in R^m.
Eigen::MatrixXd complement(const Eigen::MatrixXd& Q, int m, double tol)
{
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m) - Q * Q.transpose();
  return range_basis(P, tol, 1.0);
}

}  // namespace

HodgeDecomposition hodge_decompose(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& d_prev,
                                   const Eigen::MatrixXd& d_next, double tol)
{
  const int m = static_cast<int>(mass.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success)
    throw Error("hodge_decompose: mass matrix is not positive definite");
  // Work in coordinates w = L^T c, where the mass inner product becomes Euclidean.
  const Eigen::MatrixXd Lt = llt.matrixU();
  auto to_c = [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd {
    return Lt.triangularView<Eigen::Upper>().solve(W);
  };

  const Eigen::MatrixXd Bw = range_basis(Lt * d_prev, tol);
  // kernel of d_next in c coordinates, then mapped to w
  Eigen::MatrixXd Zc = kernel_basis(d_next, m, tol);
  const Eigen::MatrixXd Zw = range_basis(Lt * Zc, tol);
  const Eigen::MatrixXd Hw = range_basis(Zw - Bw * (Bw.transpose() * Zw), tol, 1.0);
  const Eigen::MatrixXd Cw = complement(Zw, m, tol);

  HodgeDecomposition h;
  h.exact = to_c(Bw);
  h.harmonic = to_c(Hw);
  h.coexact = to_c(Cw);
  return h;
}

}  // namespace feec
