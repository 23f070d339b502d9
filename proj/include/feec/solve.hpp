// Sparse symmetric (indefinite) linear systems.

#pragma once

#include <Eigen/Sparse>

#include <vector>

namespace feec
{

/// Symmetric matrix stored by its upper triangle.
class SparseSym
{
public:
  SparseSym() = default;
  /// Builds from triplets of the full matrix (entries below the diagonal are dropped; duplicates summed).
  static SparseSym from_full_triplets(int n, const std::vector<Eigen::Triplet<double>>& triplets);
  /// Builds from upper-triangle triplets (row <= col; duplicates summed).
  static SparseSym from_upper_triplets(int n, const std::vector<Eigen::Triplet<double>>& triplets);

  int size() const { return static_cast<int>(upper_.rows()); }
  Eigen::Index nnz() const { return upper_.nonZeros(); }
  const Eigen::SparseMatrix<double>& upper() const { return upper_; }
  Eigen::SparseMatrix<double> full() const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

private:
  Eigen::SparseMatrix<double> upper_;
};

enum class SolverKind
{
  Direct,
  Iterative
};

struct SolveOptions
{
  SolverKind kind = SolverKind::Direct;
  double tol = 1e-10;   ///< required relative residual ||Mx - b|| / ||b||
  int max_iterations = 0;  ///< iterative path; 0 means 10 * size
};

struct SolveInfo
{
  double residual = 0.0;
  int iterations = 0;
};

/// Solves M x = b. Throws SolverError (carrying the best relative residual reached) when the
/// residual target is missed or the factorization fails.
Eigen::VectorXd solve_sym_indefinite(const SparseSym& M, const Eigen::VectorXd& b, const SolveOptions& options = {},
                                     SolveInfo* info = nullptr);

}  // namespace feec
