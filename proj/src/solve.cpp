#include "feec/solve.hpp"

#include "feec/errors.hpp"

#include <Eigen/UmfPackSupport>
#include <fmt/format.h>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>
#include <limits>

namespace feec
{

SparseSym SparseSym::from_full_triplets(int n, const std::vector<Eigen::Triplet<double>>& triplets)
{
  std::vector<Eigen::Triplet<double>> up;
  up.reserve(triplets.size() / 2 + n);
  for (const auto& t : triplets)
    if (t.row() <= t.col())
      up.push_back(t);
  return from_upper_triplets(n, up);
}

SparseSym SparseSym::from_upper_triplets(int n, const std::vector<Eigen::Triplet<double>>& triplets)
{
  SparseSym s;
  s.upper_.resize(n, n);
  for (const auto& t : triplets)
    if (t.row() > t.col())
      throw Error("SparseSym: triplet below the diagonal");
  s.upper_.setFromTriplets(triplets.begin(), triplets.end());
  s.upper_.makeCompressed();
  return s;
}

Eigen::SparseMatrix<double> SparseSym::full() const
{
  Eigen::SparseMatrix<double> f = upper_.selfadjointView<Eigen::Upper>();
  f.makeCompressed();
  return f;
}

Eigen::VectorXd SparseSym::multiply(const Eigen::VectorXd& x) const
{
  return upper_.selfadjointView<Eigen::Upper>() * x;
}

namespace
{

/// Jacobi preconditioner on |diag|, with 1 where the diagonal vanishes; positive definite as MINRES requires.
class AbsDiagonalPreconditioner
{
  using Vector = Eigen::VectorXd;

public:
  using StorageIndex = Vector::StorageIndex;
  enum
  {
    ColsAtCompileTime = Eigen::Dynamic,
    MaxColsAtCompileTime = Eigen::Dynamic
  };

  AbsDiagonalPreconditioner() = default;

  Eigen::Index rows() const { return invdiag_.size(); }
  Eigen::Index cols() const { return invdiag_.size(); }

  template <typename MatType>
  AbsDiagonalPreconditioner& analyzePattern(const MatType&)
  {
    return *this;
  }

  template <typename MatType>
  AbsDiagonalPreconditioner& factorize(const MatType& mat)
  {
    invdiag_.resize(mat.cols());
    for (int j = 0; j < mat.outerSize(); ++j) {
      double d = 0.0;
      for (typename MatType::InnerIterator it(mat, j); it; ++it)
        if (it.index() == j)
          d = std::abs(it.value());
      invdiag_(j) = d;
    }
    // Diagonal entries that are zero up to roundoff (condensation leaves some at 1e-26) are scaled like the
    // largest entry.
    const double largest = invdiag_.size() ? invdiag_.maxCoeff() : 0.0;
    for (Eigen::Index j = 0; j < invdiag_.size(); ++j)
      invdiag_(j) = invdiag_(j) > 1e-12 * largest ? 1.0 / invdiag_(j) : (largest > 0.0 ? 1.0 / largest : 1.0);
    return *this;
  }

  template <typename MatType>
  AbsDiagonalPreconditioner& compute(const MatType& mat)
  {
    return factorize(mat);
  }

  template <typename Rhs, typename Dest>
  void _solve_impl(const Rhs& b, Dest& x) const
  {
    x = invdiag_.array() * b.array();
  }

  template <typename Rhs>
  const Eigen::Solve<AbsDiagonalPreconditioner, Rhs> solve(const Eigen::MatrixBase<Rhs>& b) const
  {
    return Eigen::Solve<AbsDiagonalPreconditioner, Rhs>(*this, b.derived());
  }

  Eigen::ComputationInfo info() { return Eigen::Success; }

private:
  Vector invdiag_;
};

double relative_residual(const SparseSym& M, const Eigen::VectorXd& x, const Eigen::VectorXd& b)
{
  return (M.multiply(x) - b).norm() / b.norm();
}

}  // namespace

Eigen::VectorXd solve_sym_indefinite(const SparseSym& M, const Eigen::VectorXd& b, const SolveOptions& options,
                                     SolveInfo* info)
{
  if (b.size() != M.size())
    throw DimensionMismatch("solve_sym_indefinite: right-hand side size differs from matrix size");
  SolveInfo local;
  SolveInfo& inf = info ? *info : local;
  if (b.size() == 0 || b.norm() == 0.0) {
    inf = {};
    return Eigen::VectorXd::Zero(b.size());
  }

  const Eigen::SparseMatrix<double> A = M.full();
  Eigen::VectorXd x;
  if (options.kind == SolverKind::Direct) {
    double best = std::numeric_limits<double>::infinity();
    {
      Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
      // Symmetric strategy: nested dissection on the pattern of A + A^T with preference for diagonal pivots.
      lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
      lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
      // Off-diagonal pivots destroy the ordering (the 91k system from n = 3, r = 2 runs out of memory in 5 GB with
      // the default 1e-3 but needs 2 GB with 1e-8); accept small diagonal pivots and let iterative refinement
      // recover the accuracy.
      lu.umfpackControl()(UMFPACK_SYM_PIVOT_TOLERANCE) = 1e-8;
      lu.compute(A);
      if (lu.info() == Eigen::Success) {
        x = lu.solve(b);
        inf.residual = relative_residual(M, x, b);
        // Iterative refinement reuses the factorization; stop when a step gains less than a factor 2.
        for (int step = 0; step < 10; ++step) {
          const Eigen::VectorXd r = b - M.multiply(x);
          const Eigen::VectorXd xn = x + lu.solve(r);
          const double rn = relative_residual(M, xn, b);
          if (!(rn < 0.5 * inf.residual))
            break;
          x = xn;
          inf.residual = rn;
          inf.iterations = step + 1;
        }
        if (std::isfinite(inf.residual))
          best = inf.residual;
      }
    }
    if (!(best <= options.tol)) {
      // Second route: Eigen's supernodal LU, which does not depend on the host BLAS.
      Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> slu;
      slu.compute(A);
      if (slu.info() != Eigen::Success)
        throw SolverError("sparse LU factorization failed (matrix singular to working precision)", best);
      Eigen::VectorXd x2 = slu.solve(b);
      const double r2 = relative_residual(M, x2, b);
      if (r2 < best) {
        x = std::move(x2);
        inf.residual = r2;
      }
    }
  } else {
    Eigen::MINRES<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper, AbsDiagonalPreconditioner> minres;
    minres.setTolerance(options.tol * 0.1);
    minres.setMaxIterations(options.max_iterations > 0 ? options.max_iterations : 10 * static_cast<int>(b.size()));
    minres.compute(A);
    x = minres.solve(b);
    inf.iterations = static_cast<int>(minres.iterations());
    inf.residual = relative_residual(M, x, b);
  }
  if (!std::isfinite(inf.residual) || inf.residual > options.tol)
    throw SolverError(fmt::format("linear solve missed the residual target: {:.3e} > {:.3e}", inf.residual, options.tol),
                      inf.residual);
  return x;
}

}  // namespace feec
