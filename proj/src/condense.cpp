#include "feec/condense.hpp"

#include "feec/basis.hpp"
#include "feec/errors.hpp"

#include <fmt/format.h>
#include <tbb/parallel_for.h>

#include <cmath>
#include <limits>
#include <ostream>

extern "C" {
void dsytrf_(const char* uplo, const int* n, double* a, const int* lda, int* ipiv, double* work, const int* lwork,
             int* info);
void dsytrs_(const char* uplo, const int* n, const int* nrhs, const double* a, const int* lda, const int* ipiv,
             double* b, const int* ldb, int* info);
void dsycon_(const char* uplo, const int* n, const double* a, const int* lda, const int* ipiv, const double* anorm,
             double* rcond, double* work, int* iwork, int* info);
double dlansy_(const char* norm, const char* uplo, const int* n, const double* a, const int* lda, double* work);
}

namespace feec
{

LocalFactor::LocalFactor(const Eigen::MatrixXd& A, int cell)
{
  const int n = static_cast<int>(A.rows());
  if (n == 0) {
    rcond_ = 1.0;
    return;
  }
  // Symmetric equilibration D A D with D_ii = 1 / sqrt(max_j |a_ij|): the blocks of a local problem scale
  // with different powers of h, which would otherwise push rcond below the threshold on fine meshes.
  scale_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double m = A.row(i).cwiseAbs().maxCoeff();
    scale_[i] = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
  }
  ldl_ = scale_.asDiagonal() * A * scale_.asDiagonal();
  const char uplo = 'U';
  std::vector<double> normwork(n);
  const double anorm = dlansy_("1", &uplo, &n, ldl_.data(), &n, normwork.data());
  ipiv_.resize(n);
  int info = 0;
  int lwork = -1;
  double wq = 0.0;
  dsytrf_(&uplo, &n, ldl_.data(), &n, ipiv_.data(), &wq, &lwork, &info);
  lwork = std::max(1, static_cast<int>(wq));
  std::vector<double> work(lwork);
  dsytrf_(&uplo, &n, ldl_.data(), &n, ipiv_.data(), work.data(), &lwork, &info);
  if (info > 0)
    throw SingularLocalBlock(fmt::format("local block of cell {} is exactly singular (pivot {})", cell, info), cell,
                             0.0);
  std::vector<double> cwork(2 * n);
  std::vector<int> iwork(n);
  dsycon_(&uplo, &n, ldl_.data(), &n, ipiv_.data(), &anorm, &rcond_, cwork.data(), iwork.data(), &info);
  if (!(rcond_ > singular_rcond))
    throw SingularLocalBlock(fmt::format("local block of cell {} is numerically singular (rcond {:.3e})", cell, rcond_),
                             cell, rcond_);
}

Eigen::MatrixXd LocalFactor::solve(const Eigen::MatrixXd& rhs) const
{
  const int n = size();
  const int nrhs = static_cast<int>(rhs.cols());
  if (n == 0 || nrhs == 0)
    return rhs;
  Eigen::MatrixXd x = scale_.asDiagonal() * rhs;
  int info = 0;
  const char uplo = 'U';
  dsytrs_(&uplo, &n, &nrhs, ldl_.data(), &n, ipiv_.data(), x.data(), &n, &info);
  return scale_.asDiagonal() * x;
}

Eigen::VectorXd LocalFactor::solve(const Eigen::VectorXd& rhs) const
{
  Eigen::MatrixXd m = rhs;
  return solve(m).col(0);
}

namespace
{

/// Representative cell of each Jacobian class (for error reports).
std::vector<int> class_representatives(const Mesh& mesh)
{
  std::vector<int> rep(mesh.num_classes(), -1);
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (rep[mesh.cell_class[c]] < 0)
      rep[mesh.cell_class[c]] = c;
  return rep;
}

}  // namespace

CondensedSystem condense(const HybridSystem& system)
{
  const Mesh& mesh = system.disc->mesh();
  const int ncls = mesh.num_classes();
  const std::vector<int> rep = class_representatives(mesh);
  CondensedSystem cs;
  cs.system = &system;
  cs.factors.resize(ncls);
  std::vector<Eigen::MatrixXd> X(ncls);  // A^{-1} B^T per class
  std::vector<Eigen::MatrixXd> SK(ncls);
  for (int cls = 0; cls < ncls; ++cls) {
    if (rep[cls] < 0)
      continue;
    cs.factors[cls] = LocalFactor(system.A[cls], rep[cls]);
    X[cls] = cs.factors[cls].solve(Eigen::MatrixXd(system.B[cls].transpose()));
    SK[cls] = -system.B[cls] * X[cls];
    SK[cls] = 0.5 * (SK[cls] + SK[cls].transpose()).eval();
  }

  const int ng = system.layout.global_size;
  cs.rhs = system.G;
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < system.num_cells(); ++c) {
    const int cls = mesh.cell_class[c];
    const std::vector<int> g = system.cell_globals(c);
    const Eigen::MatrixXd& s = SK[cls];
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (g[i] <= g[j] && s(i, j) != 0.0)
          trip.emplace_back(g[i], g[j], s(i, j));
    const Eigen::VectorXd r = X[cls].transpose() * system.F[c];
    for (std::size_t i = 0; i < g.size(); ++i)
      cs.rhs(g[i]) -= r(static_cast<Eigen::Index>(i));
  }
  for (int i = 0; i < ng; ++i)
    trip.emplace_back(i, i, 0.0);
  cs.S = SparseSym::from_upper_triplets(ng, trip);
  return cs;
}

std::vector<Eigen::VectorXd> recover_local(const CondensedSystem& condensed, const Eigen::VectorXd& y)
{
  const HybridSystem& sys = *condensed.system;
  if (y.size() != sys.layout.global_size)
    throw DimensionMismatch("recover_local: global vector has the wrong size");
  const Mesh& mesh = sys.disc->mesh();
  std::vector<Eigen::VectorXd> x(sys.num_cells());
  tbb::parallel_for(0, sys.num_cells(), [&](int c) {
    const std::vector<int> g = sys.cell_globals(c);
    Eigen::VectorXd yc(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
      yc(static_cast<Eigen::Index>(i)) = y(g[i]);
    const Eigen::VectorXd rhs = sys.F[c] - sys.B_block(c).transpose() * yc;
    x[c] = condensed.factors[mesh.cell_class[c]].solve(rhs);
  });
  return x;
}

bool predicted_strict_reduction(const StablePair& pair)
{
  const int gap = pair.n - pair.k;
  if (pair.r < 1)
    return false;
  return pair.u_family == Family::Full ? pair.r >= gap + 1 : pair.r >= gap;
}

namespace
{

/// Rank of d applied to the interior (vanishing-trace) nodal functions of a reference element.
int interior_d_rank(const ReferenceElement& ref)
{
  std::vector<PolyForm<Rational>> images;
  for (int i : ref.interior_dofs())
    images.push_back(ext_derivative(ref.exact[i]));
  return images.empty() ? 0 : exact_rank(images);
}

}  // namespace

DofReport dof_report(const Mesh& mesh, const StablePair& pair)
{
  pair.validate();
  DofReport rep;
  rep.n = pair.n;
  rep.k = pair.k;
  rep.r = pair.r;
  rep.sigma_family = pair.sigma_family;
  rep.u_family = pair.u_family;
  rep.N = mesh.N;
  rep.cells = mesh.num_cells();
  const int n = pair.n;
  const int k = pair.k;
  const ElementSpec us = pair.u();
  const FeSpace uspace = build_space(mesh, us.family, us.degree, us.k, SpaceKind::Conforming);
  const ReferenceElement& uref = *uspace.ref;
  long long standard = uspace.dim + (k == 0 ? 1 : 0);
  long long condensed = (k == 0 ? 1 : 0) + (k == n ? mesh.num_cells() : 0);
  long long local = uref.size() + (k == n ? 1 : 0);
  if (pair.has_sigma()) {
    const ElementSpec ss = pair.sigma();
    const FeSpace sspace = build_space(mesh, ss.family, ss.degree, ss.k, SpaceKind::Conforming);
    standard += sspace.dim;
    const TraceSpace st = build_trace_space(mesh, ss.family, ss.degree, ss.k, TraceKind::SingleValued);
    condensed += st.dim;
    local += sspace.ref->size() + st.boundary_size();
    rep.interior_sigma = static_cast<int>(sspace.ref->interior_dofs().size());
    rep.interior_exact = interior_d_rank(*sspace.ref);
  }
  if (k <= n - 1) {
    const TraceSpace ut = build_trace_space(mesh, us.family, us.degree, us.k, TraceKind::SingleValued);
    condensed += ut.dim;
    local += ut.boundary_size();
  }
  rep.interior_coexact = interior_d_rank(uref);
  rep.interior_harmonic = k == n ? 1 : 0;
  rep.standard_size = standard;
  rep.condensed_size = condensed;
  rep.hybrid_size = local * mesh.num_cells() + condensed;
  rep.identity_residual = (standard - condensed) - static_cast<long long>(mesh.num_cells()) *
                                                       (rep.interior_sigma + rep.interior_exact + rep.interior_coexact);
  rep.strictly_smaller = condensed < standard;
  rep.predicted_smaller = predicted_strict_reduction(pair);
  return rep;
}

std::ostream& operator<<(std::ostream& os, const DofReport& r)
{
  os << fmt::format("DOF report: n={} k={} r={} sigma={} u={} N={} cells={}\n", r.n, r.k, r.r, to_string(r.sigma_family),
                    to_string(r.u_family), r.N, r.cells);
  os << fmt::format("  {:<34}{:>12}\n", "standard system size", r.standard_size);
  os << fmt::format("  {:<34}{:>12}\n", "hybrid system size", r.hybrid_size);
  os << fmt::format("  {:<34}{:>12}\n", "condensed system size", r.condensed_size);
  os << fmt::format("  {:<34}{:>12}\n", "interior W^{k-1}(K) per cell", r.interior_sigma);
  os << fmt::format("  {:<34}{:>12}\n", "interior exact part per cell", r.interior_exact);
  os << fmt::format("  {:<34}{:>12}\n", "interior coexact part per cell", r.interior_coexact);
  os << fmt::format("  {:<34}{:>12}\n", "interior harmonic part per cell", r.interior_harmonic);
  os << fmt::format("  {:<34}{:>12}  ({})\n", "identity residual", r.identity_residual,
                    r.identity_holds() ? "holds" : "VIOLATED");
  os << fmt::format("  {:<34}{:>12}  (threshold rule: {})\n", "strictly smaller", r.strictly_smaller ? "yes" : "no",
                    r.predicted_smaller ? "yes" : "no");
  return os;
}

}  // namespace feec
